// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <string>
#include <vector>

#include "scenario/parser.hpp"

namespace cove::scenario {

/// Stable name for a COVH/COVG/COVI function id (trace + coverage keys).
std::string abi_fn_name(uint64_t fn);

/// Normalized outcome of one step, whatever its kind.
struct StepResult {
  AbiStatus status = AbiStatus::Ok;
  std::optional<uint64_t> value;
  std::optional<ExceptionKind> fault;
  std::optional<TvmExit> exit;
  std::array<uint64_t, 6> response_values{};
};

struct MttDelta {
  uint64_t page;
  PageState state;
  std::optional<PageOwner> owner;
  std::optional<PageUse> use;
};

/// One line-delimited JSON record per step: seq, actor, op, the canonical
/// source line, the result, and the pages whose MTT entry changed. Field
/// order is fixed so traces diff cleanly.
std::string trace_record(uint64_t seq, const Step& step,
                         const StepResult& result,
                         const std::vector<MttDelta>& delta,
                         const std::string& extra_key = {},
                         const std::string& extra_value = {});

/// Header record carrying the scenario prelude; a trace file is replayable
/// on its own: prelude + each record's dsl line form a scenario again.
std::string trace_header(const std::string& name, const std::string& prelude);

std::string describe_result(const StepResult& result);
std::string describe_expectation(const Expectation& e);
bool expectation_matches(const Expectation& e, const StepResult& r);

}  // namespace cove::scenario
