// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <span>
#include <string>

namespace cove::scenario {

/// Scenarios shipped with the library (embedded from scenarios/*.scn).
struct BuiltinScenario {
  const char* name;
  const char* text;
};

std::span<const BuiltinScenario> builtin_scenarios();

/// Text of a bundled scenario, or nullptr.
const char* find_builtin_scenario(const std::string& name);

}  // namespace cove::scenario
