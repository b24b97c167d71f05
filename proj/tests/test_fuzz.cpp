// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scenario/fuzz.hpp"

using namespace cove;
using namespace cove::scenario;

TEST_CASE("fuzz: clean runs across seeds") {
  for (uint64_t seed : {1, 2, 42}) {
    FuzzOptions options;
    options.seed = seed;
    options.ops = 3000;
    FuzzReport report = run_fuzz(options);
    CAPTURE(seed);
    for (const std::string& v : report.violations) {
      CAPTURE(v);
      CHECK(false);
    }
    CHECK(report.ok());
    CHECK(report.ops_executed >= options.ops);
    CHECK(report.legal_ops > 0);
    CHECK(report.illegal_ops > 0);
    CHECK(report.denials_checked > 0);
  }
}

TEST_CASE("fuzz: identical seeds give identical reports") {
  FuzzOptions options;
  options.seed = 0xFEED;
  options.ops = 2000;
  FuzzReport a = run_fuzz(options);
  FuzzReport b = run_fuzz(options);
  CHECK(a.summary() == b.summary());
  CHECK(a.sequence_digest == b.sequence_digest);
  CHECK(a.ops_executed == b.ops_executed);
  CHECK(a.legal_ops == b.legal_ops);

  FuzzOptions other = options;
  other.seed = 0xFEED + 1;
  CHECK(run_fuzz(other).sequence_digest != a.sequence_digest);
}

TEST_CASE("fuzz: bias knob shifts the legal/illegal mix") {
  FuzzOptions mostly_legal;
  mostly_legal.seed = 7;
  mostly_legal.ops = 2000;
  mostly_legal.illegal_bias_pct = 5;
  FuzzReport a = run_fuzz(mostly_legal);

  FuzzOptions mostly_illegal = mostly_legal;
  mostly_illegal.illegal_bias_pct = 80;
  FuzzReport b = run_fuzz(mostly_illegal);

  CHECK(a.ok());
  CHECK(b.ok());
  CHECK(a.illegal_ops * 3 < b.illegal_ops);
}

TEST_CASE("fuzz: detector self-test via the oracle corruption hook") {
  FuzzOptions options;
  options.seed = 3;
  options.ops = 600;
  options.break_oracle_at = 200;
  FuzzReport report = run_fuzz(options);
  CHECK_FALSE(report.ok());
  REQUIRE(report.first_violation_op != UINT64_MAX);
  // Detected at the first check after the corruption point.
  CHECK(report.first_violation_op >= 200);
  CHECK(report.first_violation_op <= 210);
  REQUIRE(!report.violations.empty());
  CHECK(report.violations[0].find("divergence") != std::string::npos);
}
