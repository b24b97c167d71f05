// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "core/platform.hpp"

namespace cove::scenario {

/// What a step asserts about its result. Adversary steps must carry one.
struct Expectation {
  enum class Kind : uint8_t { None, Ok, Error, Fault, Value, Exit } kind =
      Kind::None;
  AbiStatus error = AbiStatus::Ok;
  ExceptionKind fault = ExceptionKind::AccessFault;
  uint64_t value = 0;
  TvmExit::Reason exit_reason = TvmExit::Reason::Halted;
  std::optional<uint64_t> exit_arg;
};

enum class OpKind : uint8_t {
  Boot,
  Covh,          // any COVH/COVI function by id
  Read,          // raw physical access from the current hart context
  Write,
  Fetch,
  Inject,        // interrupt injection: tvm, vcpu, irq
  IntfileRead,   // register-file access to (tvm, vcpu)'s file
  IntfileWrite,
  GuestTouch,    // guest-side access: access kind + gpa [+ value]
  GuestCovg,     // covg fn + args (+ report data)
  GuestIntfile,  // guest-side file access: target tvm/vcpu, kind, value
};

struct StepOp {
  OpKind kind = OpKind::Boot;
  uint64_t fn = 0;  // COVH/COVG function id
  std::vector<uint64_t> args;
  std::string program;  // vcpu program name (tvm_create_vcpu)
  AccessKind access = AccessKind::Load;
  std::array<uint8_t, 64> report_data{};
};

struct Step {
  enum class Actor : uint8_t { Host, Tvm, Adversary } actor = Actor::Host;
  TvmId actor_tvm = 0;
  VcpuId actor_vcpu = 0;
  StepOp op;
  Expectation expect;
  size_t line = 0;
  std::string text;  // canonical source line (traces quote it for replay)
};

struct Scenario {
  std::string name;
  PlatformConfig config = PlatformConfig::defaults();
  std::map<std::string, TvmProgram> programs;
  std::vector<Step> steps;
  // Canonical non-step source (name/config/program lines); a trace plus this
  // prelude is a complete, replayable scenario.
  std::string prelude;
};

struct ParseError {
  enum class Category : uint8_t { Syntax, UnknownOp, ArityMismatch } category =
      Category::Syntax;
  size_t line = 0;
  size_t column = 0;
  std::string message;

  std::string to_string() const;
};

/// Line-oriented parser. Total: any input yields a Scenario or a positioned
/// ParseError, never a crash.
std::variant<Scenario, ParseError> parse_scenario(const std::string& text);

}  // namespace cove::scenario
