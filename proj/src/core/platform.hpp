// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <memory>

#include "core/tsm_driver.hpp"

namespace cove {

struct PlatformConfig {
  uint64_t memory_pages = 256;
  uint32_t hart_count = 1;
  std::vector<uint8_t> tsm_blob;
  std::vector<uint8_t> tsm_driver_blob;
  std::array<uint8_t, 32> root_secret{};
  bool debug_platform = false;
  uint64_t max_tvms = kDefaultMaxTvms;

  static PlatformConfig defaults();
  bool valid() const;
};

/// Result of a raw host load/store/fetch.
struct AccessResult {
  std::optional<uint64_t> value;
  std::optional<Exception> exception;
  bool unaligned = false;

  bool ok() const { return !exception.has_value() && !unaligned; }
};

struct CovhResult {
  std::optional<AbiStatus> refused;  // the domain switch itself was rejected
  TsmResponse response;

  AbiStatus status() const { return refused ? *refused : response.status; }
};

struct IntFileResult {
  AbiStatus status = AbiStatus::Ok;  // Unbound when no file exists
  std::optional<Exception> exception;
  uint64_t value = 0;
};

/// One simulated machine: memory, MTT, harts, TSM-driver, TSM, identity.
/// Everything is deterministic; two platforms built from the same config and
/// driven by the same calls behave identically. Single simulation thread;
/// distinct instances are fully independent.
class Platform {
 public:
  explicit Platform(PlatformConfig config);

  AbiStatus boot();
  bool booted() const { return driver_.booted(); }

  /// COVH/COVI entry: a full TEECALL round trip on the given hart.
  CovhResult covh(uint32_t hart_id, const CovhCall& call);

  /// Raw physical access in the hart's current (host) context.
  AccessResult host_access(uint32_t hart_id, uint64_t addr, AccessKind kind,
                           uint64_t store_value = 0);

  /// Single guest-side action for (tvm, vcpu), scheduled like a one-action
  /// tvm_run. Used to model guest-initiated COVG calls and probes.
  GuestActionResult guest_action(uint32_t hart_id, TvmId tvm, VcpuId vcpu,
                                 const Action& action);

  AbiStatus inject_interrupt(TvmId tvm, VcpuId vcpu, uint32_t irq);

  /// Register-file access to a vcpu's interrupt file from the hart's
  /// current context.
  IntFileResult intfile_access(uint32_t hart_id, TvmId tvm, VcpuId vcpu,
                               AccessKind kind, uint64_t store_value = 0);

  /// The same access issued from a guest context: (actor, actor_vcpu) runs
  /// and touches the file bound to (target, target_vcpu).
  IntFileResult guest_intfile_access(uint32_t hart_id, TvmId actor,
                                     VcpuId actor_vcpu, TvmId target,
                                     VcpuId target_vcpu, AccessKind kind,
                                     uint64_t store_value = 0);

  const PlatformConfig& config() const { return config_; }
  PhysicalMemory& memory() { return mem_; }
  const PhysicalMemory& memory() const { return mem_; }
  MemoryTracker& mtt() { return mtt_; }
  const MemoryTracker& mtt() const { return mtt_; }
  Tsm& tsm() { return tsm_; }
  const Tsm& tsm() const { return tsm_; }
  TsmDriver& driver() { return driver_; }
  Hart& hart(uint32_t id) { return harts_.at(id); }
  const Hart& hart(uint32_t id) const { return harts_.at(id); }
  uint32_t hart_count() const { return static_cast<uint32_t>(harts_.size()); }

  const TcbMeasurements& measurements() const { return driver_.measurements(); }
  const crypto::PublicKey& root_public_key() const {
    return driver_.identity().root_public_key();
  }
  const attest::AttestationEvidence* last_evidence() const {
    return tsm_.last_evidence();
  }

 private:
  PlatformConfig config_;
  PhysicalMemory mem_;
  MemoryTracker mtt_;
  Tsm tsm_;
  TsmDriver driver_;
  std::vector<Hart> harts_;
};

}  // namespace cove
