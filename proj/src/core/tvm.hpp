// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <map>
#include <set>
#include <vector>

#include "core/hart.hpp"
#include "core/measurement.hpp"
#include "core/types.hpp"

namespace cove {

enum class TvmPhase : uint8_t { Initializing, Runnable, Destroyed };

const char* to_string(TvmPhase p);

struct MemRegion {
  uint64_t gpa_start = 0;  // byte address, page-aligned
  uint64_t page_count = 0;
  enum class Kind : uint8_t { Confidential, NonConfidentialShared } kind =
      Kind::Confidential;

  uint64_t first_page() const { return gpa_start >> kPageShift; }
  bool contains_page(uint64_t gpa_page) const {
    return gpa_page >= first_page() && gpa_page < first_page() + page_count;
  }
  bool overlaps(const MemRegion& other) const {
    return first_page() < other.first_page() + other.page_count &&
           other.first_page() < first_page() + page_count;
  }
};

/// One abstract vcpu instruction. Programs stand in for ISA execution: they
/// exercise every memory, lifecycle, and service path a real guest would.
struct Action {
  enum class Kind : uint8_t { Touch, Covg, Wfi, Exit } kind = Kind::Exit;

  // Touch
  AccessKind access = AccessKind::Load;
  uint64_t gpa = 0;    // byte address, 8-byte aligned
  uint64_t value = 0;  // store operand, or the exit code for Exit

  // Covg
  uint64_t covg_fn = 0;
  std::array<uint64_t, 2> covg_args{};
  std::array<uint8_t, 64> report_data{};

  static Action touch(AccessKind k, uint64_t gpa, uint64_t value = 0) {
    Action a;
    a.kind = Kind::Touch;
    a.access = k;
    a.gpa = gpa;
    a.value = value;
    return a;
  }
  static Action covg(uint64_t fn, uint64_t arg0 = 0, uint64_t arg1 = 0) {
    Action a;
    a.kind = Kind::Covg;
    a.covg_fn = fn;
    a.covg_args = {arg0, arg1};
    return a;
  }
  static Action wfi() {
    Action a;
    a.kind = Kind::Wfi;
    return a;
  }
  static Action exit(uint64_t code) {
    Action a;
    a.kind = Kind::Exit;
    a.value = code;
    return a;
  }
};

using TvmProgram = std::vector<Action>;

/// Canonical byte encoding of (vcpu_id, program); extended into the TVM
/// measurement at vcpu creation.
std::vector<uint8_t> encode_vcpu_program(VcpuId vcpu_id,
                                         const TvmProgram& program);

struct GStageMapping {
  PageAddr spa;
  enum class Kind : uint8_t { Measured, Zero, Shared } kind = Kind::Zero;
  uint64_t table_slot = 0;  // PTE slot in the donated table pool
};

const char* to_string(GStageMapping::Kind k);

struct VcpuContext {
  VcpuId vcpu_id = 0;
  std::array<uint64_t, kGprCount> gprs{};
  uint64_t pc = 0;  // index of the next program action
  bool runnable = true;
  uint64_t halt_code = 0;
  std::vector<PageAddr> backing_pages;
  std::optional<uint64_t> interrupt_file;  // file id
  TvmProgram program;
  std::set<uint32_t> observed_irqs;  // pending set seen at last run entry
};

struct TvmExit {
  enum class Reason : uint8_t {
    GuestPageFault,
    GuestRequest,
    Wfi,
    Halted,
    InterruptPending,
  } reason = Reason::Halted;
  uint64_t detail0 = 0;  // faulting gpa / covg fn / exit code / irq mask
  uint64_t detail1 = 0;
  uint64_t detail2 = 0;
};

const char* to_string(TvmExit::Reason r);

struct Tvm {
  TvmId id = 0;
  TvmPhase phase = TvmPhase::Initializing;
  bool debug_opt_in = false;
  std::vector<MemRegion> regions;
  std::map<uint64_t, GStageMapping> gstage;  // gpa page -> mapping
  std::map<VcpuId, VcpuContext> vcpus;
  MeasurementRegister measurement;
  std::vector<PageAddr> state_pages;
  std::vector<PageAddr> table_page_pool;
  std::set<uint64_t> shared_offers;  // gpa pages offered via covg_share
  std::vector<uint64_t> free_table_slots;
  uint64_t next_table_slot = 0;

  const MemRegion* find_region(uint64_t gpa_page) const {
    for (const MemRegion& r : regions) {
      if (r.contains_page(gpa_page)) return &r;
    }
    return nullptr;
  }
  uint64_t table_capacity() const {
    return table_page_pool.size() * kMappingsPerTablePage;
  }
};

}  // namespace cove
