// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "scenario/trace.hpp"

#include <json.hpp>
#include <sstream>

namespace cove::scenario {

using ordered_json = nlohmann::ordered_json;

std::string abi_fn_name(uint64_t fn) {
  switch (fn) {
    case kCovhTsmInfo: return "tsm_info";
    case kCovhConvertPages: return "convert";
    case kCovhTvmCreate: return "tvm_create";
    case kCovhAddPageTablePages: return "tvm_add_page_table_pages";
    case kCovhAddMemoryRegion: return "tvm_add_memory_region";
    case kCovhAddMeasuredPages: return "tvm_add_measured_pages";
    case kCovhCreateVcpu: return "tvm_create_vcpu";
    case kCovhFinalize: return "tvm_finalize";
    case kCovhRun: return "tvm_run";
    case kCovhAddZeroPages: return "tvm_add_zero_pages";
    case kCovhAddSharedPages: return "tvm_add_shared_pages";
    case kCovhDestroy: return "tvm_destroy";
    case kCovhReassignPages: return "tvm_reassign_pages";
    case kCovhReclaimPages: return "reclaim";
    case kCovgGetEvidence: return "covg_get_evidence";
    case kCovgShare: return "covg_share";
    case kCovgUnshare: return "covg_unshare";
    case kCoviBindInterruptFile: return "covi_bind";
    default: {
      std::ostringstream os;
      os << "fn_0x" << std::hex << fn;
      return os.str();
    }
  }
}

namespace {

std::string op_name(const Step& step) {
  switch (step.op.kind) {
    case OpKind::Boot: return "boot";
    case OpKind::Covh: return abi_fn_name(step.op.fn);
    case OpKind::Read: return "read";
    case OpKind::Write: return "write";
    case OpKind::Fetch: return "fetch";
    case OpKind::Inject: return "inject";
    case OpKind::IntfileRead: return "intfile_read";
    case OpKind::IntfileWrite: return "intfile_write";
    case OpKind::GuestTouch:
      return std::string("guest_") + to_string(step.op.access);
    case OpKind::GuestCovg: return abi_fn_name(step.op.fn);
    case OpKind::GuestIntfile:
      return step.op.access == AccessKind::Load ? "guest_intfile_read"
                                                : "guest_intfile_write";
  }
  return "?";
}

ordered_json result_json(const StepResult& r) {
  ordered_json out;
  out["status"] = to_string(r.status);
  if (r.value.has_value()) out["value"] = *r.value;
  if (r.fault.has_value()) out["fault"] = to_string(*r.fault);
  if (r.exit.has_value()) {
    out["exit"] = to_string(r.exit->reason);
    out["exit_args"] = {r.exit->detail0, r.exit->detail1, r.exit->detail2};
  }
  return out;
}

}  // namespace

std::string trace_record(uint64_t seq, const Step& step,
                         const StepResult& result,
                         const std::vector<MttDelta>& delta,
                         const std::string& extra_key,
                         const std::string& extra_value) {
  ordered_json j;
  j["seq"] = seq;
  j["actor"] = step.actor == Step::Actor::Host      ? "host"
               : step.actor == Step::Actor::Adversary ? "adversary"
                                                      : "tvm";
  j["op"] = op_name(step);
  j["dsl"] = step.text;
  j["result"] = result_json(result);
  ordered_json deltas = ordered_json::array();
  for (const MttDelta& d : delta) {
    ordered_json e;
    e["page"] = d.page;
    e["state"] = to_string(d.state);
    if (d.owner.has_value()) {
      e["owner"] = d.owner->is_tsm ? std::string("tsm")
                                   : "tvm" + std::to_string(d.owner->tvm);
      e["use"] = to_string(*d.use);
    }
    deltas.push_back(e);
  }
  j["mtt_delta"] = deltas;
  if (!extra_key.empty()) j[extra_key] = extra_value;
  return j.dump();
}

std::string trace_header(const std::string& name, const std::string& prelude) {
  ordered_json j;
  j["seq"] = nullptr;
  j["scenario"] = name;
  j["prelude"] = prelude;
  return j.dump();
}

std::string describe_result(const StepResult& r) {
  std::ostringstream os;
  if (r.fault.has_value()) {
    os << "fault=" << to_string(*r.fault);
    return os.str();
  }
  os << "status=" << to_string(r.status);
  if (r.exit.has_value()) {
    os << " exit=" << to_string(r.exit->reason) << "(" << r.exit->detail0
       << ")";
  }
  if (r.value.has_value()) os << " value=" << *r.value;
  return os.str();
}

std::string describe_expectation(const Expectation& e) {
  std::ostringstream os;
  switch (e.kind) {
    case Expectation::Kind::None: return "(none)";
    case Expectation::Kind::Ok: return "ok";
    case Expectation::Kind::Error:
      os << "error " << to_string(e.error);
      break;
    case Expectation::Kind::Fault:
      os << "fault " << to_string(e.fault);
      break;
    case Expectation::Kind::Value:
      os << "value " << e.value;
      break;
    case Expectation::Kind::Exit:
      os << "exit " << to_string(e.exit_reason);
      if (e.exit_arg.has_value()) os << " " << *e.exit_arg;
      break;
  }
  return os.str();
}

bool expectation_matches(const Expectation& e, const StepResult& r) {
  switch (e.kind) {
    case Expectation::Kind::None:
      return true;
    case Expectation::Kind::Ok:
      return r.status == AbiStatus::Ok && !r.fault.has_value();
    case Expectation::Kind::Error:
      return r.status == e.error;
    case Expectation::Kind::Fault:
      if (r.fault.has_value()) return *r.fault == e.fault;
      return r.exit.has_value() &&
             r.exit->reason == TvmExit::Reason::GuestPageFault &&
             e.fault == ExceptionKind::GuestPageFault;
    case Expectation::Kind::Value:
      return r.status == AbiStatus::Ok && !r.fault.has_value() &&
             r.value.has_value() && *r.value == e.value;
    case Expectation::Kind::Exit:
      return r.status == AbiStatus::Ok && r.exit.has_value() &&
             r.exit->reason == e.exit_reason &&
             (!e.exit_arg.has_value() || r.exit->detail0 == *e.exit_arg);
  }
  return false;
}

}  // namespace cove::scenario
