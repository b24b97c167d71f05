// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <map>
#include <set>

#include "scenario/oracle.hpp"
#include "scenario/trace.hpp"

namespace cove::scenario {

struct Failure {
  size_t step_index;
  size_t line;
  std::string step_text;
  std::string expected;
  std::string actual;
};

struct Report {
  std::string scenario_name;
  size_t steps_run = 0;
  std::vector<Failure> failures;
  std::vector<std::string> invariant_violations;
  std::vector<std::string> trace_lines;
  // op name -> set of result statuses observed (negative-path coverage).
  std::map<std::string, std::set<std::string>> coverage;
  std::string root_public_key_hex;
  std::vector<uint8_t> last_evidence;

  bool ok() const { return failures.empty() && invariant_violations.empty(); }
  std::string summary() const;
};

/// Execute a parsed scenario on a fresh platform: run every step in order,
/// check its expectation, emit one trace record per step, and verify the
/// global invariants after each one. Failures are data, not exceptions.
Report run_scenario(const Scenario& scenario);

}  // namespace cove::scenario
