// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "scenario/runner.hpp"

#include <sstream>

namespace cove::scenario {

namespace {

struct StepExtra {
  std::string key;
  std::string value;
};

StepResult exec_step(Platform& platform, const Scenario& scenario,
                     const Step& step, OwnerOracle& oracle, Report& report,
                     StepExtra& extra) {
  StepResult r;
  switch (step.op.kind) {
    case OpKind::Boot: {
      r.status = platform.boot();
      if (r.status == AbiStatus::Ok) {
        oracle.apply_boot(platform.config());
        report.root_public_key_hex =
            crypto::to_hex(platform.root_public_key());
        extra = {"root_public_key", report.root_public_key_hex};
      }
      return r;
    }
    case OpKind::Covh: {
      CovhCall call;
      call.fn = step.op.fn;
      for (size_t i = 0; i < step.op.args.size() && i < call.args.size(); ++i) {
        call.args[i] = step.op.args[i];
      }
      if (!step.op.program.empty()) {
        call.program = &scenario.programs.at(step.op.program);
      }
      CovhResult out = platform.covh(0, call);
      r.status = out.status();
      if (out.refused.has_value()) return r;
      r.response_values = out.response.values;
      if (r.status != AbiStatus::Ok) return r;
      oracle.apply_covh(call, out.response);
      if (step.op.fn == kCovhRun) {
        r.exit = TvmExit{
            static_cast<TvmExit::Reason>(out.response.values[0]),
            out.response.values[1], out.response.values[2],
            out.response.values[3]};
      } else {
        r.value = out.response.values[0];
      }
      return r;
    }
    case OpKind::Read:
    case OpKind::Write:
    case OpKind::Fetch: {
      AccessKind kind = step.op.kind == OpKind::Read    ? AccessKind::Load
                        : step.op.kind == OpKind::Write ? AccessKind::Store
                                                        : AccessKind::Fetch;
      uint64_t value = step.op.args.size() > 1 ? step.op.args[1] : 0;
      AccessResult out = platform.host_access(0, step.op.args[0], kind, value);
      if (out.unaligned) {
        r.status = AbiStatus::InvalidAddress;
      } else if (out.exception.has_value()) {
        r.fault = out.exception->kind;
      } else {
        r.value = out.value;
      }
      return r;
    }
    case OpKind::Inject: {
      r.status = platform.inject_interrupt(
          step.op.args[0], step.op.args[1],
          static_cast<uint32_t>(step.op.args[2]));
      return r;
    }
    case OpKind::IntfileRead:
    case OpKind::IntfileWrite: {
      AccessKind kind = step.op.kind == OpKind::IntfileRead ? AccessKind::Load
                                                            : AccessKind::Store;
      uint64_t value = step.op.args.size() > 2 ? step.op.args[2] : 0;
      IntFileResult out = platform.intfile_access(0, step.op.args[0],
                                                  step.op.args[1], kind, value);
      r.status = out.status;
      if (out.exception.has_value()) {
        r.fault = out.exception->kind;
      } else if (r.status == AbiStatus::Ok && kind == AccessKind::Load) {
        r.value = out.value;
      }
      return r;
    }
    case OpKind::GuestTouch: {
      Action a = Action::touch(step.op.access, step.op.args[0],
                               step.op.args.size() > 1 ? step.op.args[1] : 0);
      GuestActionResult out =
          platform.guest_action(0, step.actor_tvm, step.actor_vcpu, a);
      r.status = out.status;
      r.exit = out.exit;
      r.value = out.value;
      return r;
    }
    case OpKind::GuestCovg: {
      Action a = Action::covg(step.op.fn,
                              step.op.args.size() > 0 ? step.op.args[0] : 0,
                              step.op.args.size() > 1 ? step.op.args[1] : 0);
      a.report_data = step.op.report_data;
      GuestActionResult out =
          platform.guest_action(0, step.actor_tvm, step.actor_vcpu, a);
      r.status = out.status;
      r.exit = out.exit;
      if (step.op.fn == kCovgGetEvidence && r.status == AbiStatus::Ok &&
          platform.last_evidence() != nullptr) {
        report.last_evidence =
            attest::serialize_evidence(*platform.last_evidence());
        extra = {"evidence", crypto::to_hex(report.last_evidence)};
      }
      return r;
    }
    case OpKind::GuestIntfile: {
      uint64_t value = step.op.args.size() > 2 ? step.op.args[2] : 0;
      IntFileResult out = platform.guest_intfile_access(
          0, step.actor_tvm, step.actor_vcpu, step.op.args[0], step.op.args[1],
          step.op.access, value);
      r.status = out.status;
      if (out.exception.has_value()) {
        r.fault = out.exception->kind;
      } else if (r.status == AbiStatus::Ok &&
                 step.op.access == AccessKind::Load) {
        r.value = out.value;
      }
      return r;
    }
  }
  return r;
}

std::string coverage_key(const Step& step) {
  switch (step.op.kind) {
    case OpKind::Covh: return abi_fn_name(step.op.fn);
    case OpKind::GuestCovg: return abi_fn_name(step.op.fn);
    case OpKind::Boot: return "boot";
    case OpKind::Read: return "read";
    case OpKind::Write: return "write";
    case OpKind::Fetch: return "fetch";
    case OpKind::Inject: return "inject";
    case OpKind::IntfileRead:
    case OpKind::IntfileWrite: return "intfile_access";
    case OpKind::GuestTouch: return "guest_touch";
    case OpKind::GuestIntfile: return "intfile_access";
  }
  return "?";
}

std::string coverage_result(const StepResult& r) {
  if (r.fault.has_value()) return std::string("fault:") + to_string(*r.fault);
  return to_string(r.status);
}

}  // namespace

std::string Report::summary() const {
  std::ostringstream os;
  os << "scenario '" << scenario_name << "': " << steps_run << " steps, "
     << failures.size() << " failure(s), " << invariant_violations.size()
     << " invariant violation(s)";
  return os.str();
}

Report run_scenario(const Scenario& scenario) {
  Report report;
  report.scenario_name = scenario.name;
  if (!scenario.config.valid()) {
    report.invariant_violations.push_back("invalid platform config");
    return report;
  }
  Platform platform(scenario.config);
  OwnerOracle oracle(scenario.config.memory_pages);

  report.trace_lines.push_back(trace_header(scenario.name, scenario.prelude));

  for (size_t i = 0; i < scenario.steps.size(); ++i) {
    const Step& step = scenario.steps[i];
    StepExtra extra;
    StepResult result =
        exec_step(platform, scenario, step, oracle, report, extra);
    ++report.steps_run;

    report.coverage[coverage_key(step)].insert(coverage_result(result));

    std::vector<PageAddr> dirty = platform.mtt().take_dirty();
    std::vector<MttDelta> delta;
    delta.reserve(dirty.size());
    for (PageAddr p : dirty) {
      const MttEntry& e = platform.mtt().entry(p);
      delta.push_back({p.num, e.state, e.owner, e.use});
    }
    report.trace_lines.push_back(
        trace_record(i, step, result, delta, extra.key, extra.value));

    if (!expectation_matches(step.expect, result)) {
      report.failures.push_back({i, step.line, step.text,
                                 describe_expectation(step.expect),
                                 describe_result(result)});
    }

    if (platform.booted()) {
      for (std::string& v : check_invariants(platform, oracle, dirty)) {
        std::ostringstream os;
        os << "step " << i << " (line " << step.line << "): " << v;
        report.invariant_violations.push_back(os.str());
      }
    }
  }
  return report;
}

}  // namespace cove::scenario
