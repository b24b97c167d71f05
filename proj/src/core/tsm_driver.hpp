// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <functional>

#include "core/attest.hpp"
#include "core/tsm.hpp"

namespace cove {

struct TcbMeasurements {
  crypto::Digest tsm_driver_digest{};
  crypto::Digest tsm_digest{};
  uint64_t tsm_version = 0;
  bool debug_platform = false;
};

struct BootParams {
  std::vector<uint8_t> tsm_driver_blob;
  std::vector<uint8_t> tsm_blob;
  std::array<uint8_t, 32> root_secret{};
  bool debug_platform = false;
};

/// Outcome of a TEECALL. `refused` is set when the domain switch itself was
/// rejected (wrong context); the response is only meaningful otherwise.
struct TeecallOutcome {
  std::optional<AbiStatus> refused;
  TsmResponse response;
};

// Registers carrying the response across TEERET: a0 (status) and a1..a6
// (values), i.e. x10..x16. Everything else is restored from the snapshot.
inline constexpr uint32_t kFirstResponseGpr = 10;
inline constexpr uint32_t kResponseGprCount = 7;

/// The machine-mode TCB component. Boots and measures the TCB, owns the
/// host<->TSM domain switch, and guarantees that no TSM register state
/// survives into host-visible context.
class TsmDriver {
 public:
  TsmDriver(MemoryTracker& mtt, PhysicalMemory& mem, Tsm& tsm);

  /// Measure both TCB blobs, place them in confidential memory, initialize
  /// the MTT, and derive the DICE identity chain.
  AbiStatus boot(const BootParams& params);

  bool booted() const { return booted_; }
  const TcbMeasurements& measurements() const { return measurements_; }
  const attest::PlatformIdentity& identity() const { return *identity_; }

  /// ECALL half of the domain switch: snapshot host state, raise the
  /// confidential qualifier, load the request into the argument registers.
  AbiStatus teecall_enter(Hart& hart, const CovhCall& call);

  /// MRET half: lower the qualifier and rebuild host state from the
  /// snapshot, with only the response registers carrying TSM output.
  AbiStatus teeret(Hart& hart, const TsmResponse& response);

  /// Full synchronous TEECALL: enter, dispatch in the TSM, return.
  TeecallOutcome teecall(Hart& hart, const CovhCall& call);

  /// Test hook, invoked while the hart is still in TSM context.
  void set_tsm_scratch_hook(std::function<void(Hart&)> hook) {
    scratch_hook_ = std::move(hook);
  }

 private:
  MemoryTracker& mtt_;
  PhysicalMemory& mem_;
  Tsm& tsm_;
  bool booted_ = false;
  TcbMeasurements measurements_;
  std::optional<attest::PlatformIdentity> identity_;
  std::function<void(Hart&)> scratch_hook_;
};

}  // namespace cove
