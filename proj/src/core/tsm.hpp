// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <map>

#include "core/attest.hpp"
#include "core/mtt.hpp"
#include "core/tvm.hpp"

namespace cove {

/// A COVH request as carried through TEECALL: function id in a6, scalar
/// arguments in a0..a5. The vcpu program payload of create_vcpu travels
/// out-of-band; everything else fits the registers.
struct CovhCall {
  uint64_t fn = 0;
  std::array<uint64_t, 6> args{};
  const TvmProgram* program = nullptr;
};

/// Status in a0, values in a1..a6.
struct TsmResponse {
  AbiStatus status = AbiStatus::Ok;
  std::array<uint64_t, 6> values{};

  static TsmResponse err(AbiStatus s) { return {s, {}}; }
};

/// Outcome of one guest-side action executed outside tvm_run (the scenario
/// driver's stand-in for scheduling the vcpu for a single step).
struct GuestActionResult {
  AbiStatus status = AbiStatus::Ok;
  std::optional<TvmExit> exit;
  std::optional<uint64_t> value;
};

/// The TEE Security Manager: owns every TVM, its G-stage map and
/// measurement, the interrupt files, and the COVH/COVG/COVI handlers. All
/// mutations of confidential ownership go through the MemoryTracker; the
/// host above this interface is untrusted and every argument is validated.
class Tsm {
 public:
  Tsm(MemoryTracker& mtt, PhysicalMemory& mem, uint64_t max_tvms);

  void attach_identity(const attest::PlatformIdentity* identity) {
    identity_ = identity;
  }

  /// COVH entry point; runs with `hart` in TSM context.
  TsmResponse dispatch(const CovhCall& call, Hart& hart);

  /// Single guest action on behalf of (tvm, vcpu); used by the scenario
  /// driver to model guest-initiated COVG calls and memory touches. Does
  /// not advance the vcpu program.
  GuestActionResult guest_action(TvmId tvm, VcpuId vcpu, const Action& action,
                                 Hart& hart);

  InjectStatus inject(TvmId tvm, VcpuId vcpu, uint32_t irq);

  /// Register-file access path for a vcpu's interrupt file (any hart state).
  IntFileAccessResult interrupt_file_access(TvmId tvm, VcpuId vcpu, Hart& hart,
                                            AccessKind kind, uint64_t value,
                                            AbiStatus& status);

  /// Same access issued from (actor, actor_vcpu)'s guest context against the
  /// file bound to (target, target_vcpu).
  IntFileAccessResult guest_intfile_access(TvmId actor, VcpuId actor_vcpu,
                                           TvmId target, VcpuId target_vcpu,
                                           Hart& hart, AccessKind kind,
                                           uint64_t value, AbiStatus& status);

  /// G-stage translation for a data access by `tvm`. Returns the mapping or
  /// nothing (guest page fault). Fetches through Shared mappings fault: the
  /// TSM maps shared pages without execute permission.
  const GStageMapping* translate(const Tvm& tvm, uint64_t gpa_page,
                                 AccessKind kind) const;

  const Tvm* find_tvm(TvmId id) const;
  const std::map<TvmId, Tvm>& tvms() const { return tvms_; }
  const std::map<uint64_t, InterruptFile>& interrupt_files() const {
    return files_;
  }
  const attest::AttestationEvidence* last_evidence() const {
    return last_evidence_ ? &*last_evidence_ : nullptr;
  }
  uint64_t max_tvms() const { return max_tvms_; }

 private:
  TsmResponse tsm_info();
  TsmResponse convert_pages(uint64_t base, uint64_t count);
  TsmResponse reclaim_pages(uint64_t base, uint64_t count);
  TsmResponse tvm_create(uint64_t base, uint64_t count, uint64_t debug);
  TsmResponse tvm_add_page_table_pages(TvmId id, uint64_t base, uint64_t count);
  TsmResponse tvm_add_memory_region(TvmId id, uint64_t kind, uint64_t gpa,
                                    uint64_t count);
  TsmResponse tvm_add_measured_pages(TvmId id, uint64_t src, uint64_t dest,
                                     uint64_t gpa);
  TsmResponse tvm_create_vcpu(TvmId id, VcpuId vcpu, uint64_t base,
                              uint64_t count, const TvmProgram* program);
  TsmResponse tvm_finalize(TvmId id);
  TsmResponse tvm_run(TvmId id, VcpuId vcpu, Hart& hart);
  TsmResponse tvm_add_zero_pages(TvmId id, uint64_t dest, uint64_t gpa);
  TsmResponse tvm_add_shared_pages(TvmId id, uint64_t src, uint64_t gpa);
  TsmResponse tvm_destroy(TvmId id);

  AbiStatus covg_share(Tvm& tvm, uint64_t gpa, uint64_t count);
  AbiStatus covg_unshare(Tvm& tvm, uint64_t gpa, uint64_t count);
  AbiStatus covg_get_evidence(Tvm& tvm,
                              const std::array<uint8_t, 64>& report_data);
  AbiStatus covi_bind_interrupt_file(TvmId id, VcpuId vcpu, uint64_t page_addr);

  struct ActionOutcome {
    enum class Kind : uint8_t { Continue, Exit } kind = Kind::Continue;
    TvmExit exit;
    std::optional<uint64_t> value;
    std::optional<AbiStatus> covg_status;
  };
  ActionOutcome exec_action(Tvm& tvm, VcpuContext& vcpu, const Action& action,
                            Hart& hart, bool advance_pc);

  Tvm* lookup(TvmId id);  // live (not destroyed) TVMs only

  // Page helpers; every arg is an untrusted byte address.
  std::optional<PageAddr> checked_page(uint64_t byte_addr) const;
  AbiStatus map_gpa(Tvm& tvm, uint64_t gpa_page, PageAddr spa,
                    GStageMapping::Kind kind);
  void unmap_gpa(Tvm& tvm, uint64_t gpa_page);
  void revoke_shared_mappings(PageAddr start, uint64_t count);
  void write_state_texture(Tvm& tvm);
  void sync_interrupt_file(const InterruptFile& file);
  void save_vcpu(VcpuContext& vcpu, const Hart& hart);
  void restore_vcpu(VcpuContext& vcpu, Hart& hart);
  InterruptFile* file_of(TvmId tvm, VcpuId vcpu);

  MemoryTracker& mtt_;
  PhysicalMemory& mem_;
  uint64_t max_tvms_;
  TvmId next_tvm_id_ = 0;
  uint64_t next_file_id_ = 0;
  std::map<TvmId, Tvm> tvms_;
  std::map<uint64_t, InterruptFile> files_;
  const attest::PlatformIdentity* identity_ = nullptr;
  std::optional<attest::AttestationEvidence> last_evidence_;
  uint64_t dispatch_count_ = 0;
};

}  // namespace cove
