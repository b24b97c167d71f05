// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "core/platform.hpp"

namespace cove::scenario {

/// Independent page -> owner model, replayed from observed ABI calls and
/// their results by its own flat-map rules. The platform's MTT must agree
/// with it after every step; any divergence is an enforcement bug (or, with
/// the test-only corruption hook, a detector self-test).
class OwnerOracle {
 public:
  enum class State : uint8_t { Host, Free, Owned };
  struct Entry {
    State state = State::Host;
    bool tsm_owned = false;
    TvmId tvm = 0;
  };

  explicit OwnerOracle(uint64_t pages) : entries_(pages) {}

  /// Marks the TCB pages the boot flow claims at the top of memory.
  void apply_boot(const PlatformConfig& config);

  /// Replays one successful COVH/COVI call (status was Ok).
  void apply_covh(const CovhCall& call, const TsmResponse& response);

  /// Test-only corruption: forget one owned page so the next comparison
  /// must diverge. Validates the detector itself.
  void corrupt_for_test();

  /// Empty string when the MTT agrees everywhere, else a description of the
  /// first divergent page.
  std::string divergence(const MemoryTracker& mtt) const;

  const Entry& entry(uint64_t page) const { return entries_[page]; }
  const std::set<uint64_t>& pages_of(TvmId tvm) const;

 private:
  void own(uint64_t page, TvmId tvm);

  std::vector<Entry> entries_;
  std::map<TvmId, std::set<uint64_t>> tvm_pages_;
};

/// Platform-wide invariants checked after every scenario/fuzz step:
/// oracle agreement, scrub of freshly freed/reclaimed pages, G-stage and
/// ownership coherence, owner liveness, measurement replay, hart legality.
/// `touched_tvm` narrows the measurement replay to one TVM (fuzz loops);
/// leave empty to replay all.
std::vector<std::string> check_invariants(
    const Platform& platform, const OwnerOracle& oracle,
    const std::vector<PageAddr>& dirty,
    std::optional<TvmId> touched_tvm = std::nullopt);

}  // namespace cove::scenario
