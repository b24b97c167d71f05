// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "scenario/builtin.hpp"

namespace cove::scenario {

namespace {

const BuiltinScenario kScenarios[] = {
#include "builtin_scenarios.inc"
};

}  // namespace

std::span<const BuiltinScenario> builtin_scenarios() {
  return {kScenarios, std::size(kScenarios)};
}

const char* find_builtin_scenario(const std::string& name) {
  for (const BuiltinScenario& s : builtin_scenarios()) {
    if (name == s.name) return s.text;
  }
  return nullptr;
}

}  // namespace cove::scenario
