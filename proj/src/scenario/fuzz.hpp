// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include "scenario/oracle.hpp"

namespace cove::scenario {

struct FuzzOptions {
  uint64_t seed = 1;
  uint64_t ops = 1000;
  uint32_t illegal_bias_pct = 20;  // share of deliberately illegal calls
  uint64_t memory_pages = 128;
  uint64_t max_tvms = 8;
  // Test-only: corrupt the oracle after this many executed ops to prove the
  // detector fires. Not reachable from the CLI.
  uint64_t break_oracle_at = UINT64_MAX;
};

struct FuzzReport {
  uint64_t seed = 0;
  uint64_t ops_requested = 0;
  uint64_t ops_executed = 0;
  uint64_t legal_ops = 0;
  uint64_t illegal_ops = 0;
  uint64_t denials_checked = 0;
  std::vector<std::string> violations;  // first kMaxRecorded kept verbatim
  uint64_t violation_count = 0;
  uint64_t first_violation_op = UINT64_MAX;
  std::string sequence_digest;  // digest of (op, args, status) stream

  bool ok() const { return violation_count == 0; }
  std::string summary() const;
};

/// Seed-deterministic ABI call fuzzing against a fresh platform: mostly
/// legal call sequences with a configurable share of deliberate violations,
/// asserting the ownership oracle, scrub, lifecycle legality, and
/// measurement replay after every call. Identical seeds give identical
/// sequences and reports.
FuzzReport run_fuzz(const FuzzOptions& options);

}  // namespace cove::scenario
