// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "cove/cove.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "scenario/builtin.hpp"
#include "scenario/fuzz.hpp"
#include "scenario/runner.hpp"

using namespace cove;

struct cove_platform {
  Platform impl;
};

struct cove_program {
  TvmProgram actions;
};

struct cove_report {
  scenario::Report impl;
  std::string summary;
  std::vector<std::string> failure_texts;
};

struct cove_fuzz_report {
  scenario::FuzzReport impl;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

void set_error(std::string msg) { g_last_error = std::move(msg); }

cove_status invalid_arg(const char* what) {
  set_error(what);
  return COVE_ERR_INVALID_ARG;
}

AccessKind to_access_kind(cove_access_kind kind) {
  switch (kind) {
    case COVE_ACCESS_STORE: return AccessKind::Store;
    case COVE_ACCESS_FETCH: return AccessKind::Fetch;
    default: return AccessKind::Load;
  }
}

int to_exc_code(ExceptionKind kind) {
  switch (kind) {
    case ExceptionKind::IllegalInstruction: return COVE_EXC_ILLEGAL_INSTRUCTION;
    case ExceptionKind::VirtualInstruction: return COVE_EXC_VIRTUAL_INSTRUCTION;
    case ExceptionKind::AccessFault: return COVE_EXC_ACCESS_FAULT;
    case ExceptionKind::GuestPageFault: return COVE_EXC_GUEST_PAGE_FAULT;
    default: return COVE_EXC_ACCESS_FAULT;
  }
}

void fill_guest_result(const GuestActionResult& in, cove_guest_result* out) {
  std::memset(out, 0, sizeof(*out));
  out->status = static_cast<uint64_t>(in.status);
  if (in.exit.has_value()) {
    out->has_exit = 1;
    out->exit_reason = static_cast<uint64_t>(in.exit->reason);
    out->exit_args[0] = in.exit->detail0;
    out->exit_args[1] = in.exit->detail1;
    out->exit_args[2] = in.exit->detail2;
  }
  if (in.value.has_value()) {
    out->has_value = 1;
    out->value = *in.value;
  }
}

cove_status run_parsed(const std::string& text, cove_report** out) {
  auto parsed = scenario::parse_scenario(text);
  if (auto* err = std::get_if<scenario::ParseError>(&parsed)) {
    set_error(err->to_string());
    return COVE_ERR_PARSE;
  }
  auto* report = new cove_report;
  report->impl = scenario::run_scenario(std::get<scenario::Scenario>(parsed));
  report->summary = report->impl.summary();
  for (const scenario::Failure& f : report->impl.failures) {
    std::ostringstream os;
    os << "step " << f.step_index << " (line " << f.line << "): '"
       << f.step_text << "' expected " << f.expected << ", got " << f.actual;
    report->failure_texts.push_back(os.str());
  }
  *out = report;
  return COVE_OK;
}

}  // namespace

extern "C" {

const char* cove_last_error(void) { return g_last_error.c_str(); }

const char* cove_version(void) { return "1.0.0"; }

const char* cove_status_name(uint64_t abi_status) {
  return to_string(static_cast<AbiStatus>(abi_status));
}

cove_status cove_platform_create(const cove_platform_config* config,
                                 cove_platform** out) {
  if (out == nullptr) return invalid_arg("out is null");
  PlatformConfig cfg = PlatformConfig::defaults();
  if (config != nullptr) {
    if (config->memory_pages != 0) cfg.memory_pages = config->memory_pages;
    if (config->hart_count != 0) cfg.hart_count = config->hart_count;
    if (config->max_tvms != 0) cfg.max_tvms = config->max_tvms;
    if (config->tsm_blob != nullptr) {
      cfg.tsm_blob.assign(config->tsm_blob,
                          config->tsm_blob + config->tsm_blob_len);
    }
    if (config->tsm_driver_blob != nullptr) {
      cfg.tsm_driver_blob.assign(
          config->tsm_driver_blob,
          config->tsm_driver_blob + config->tsm_driver_blob_len);
    }
    if (config->root_secret != nullptr) {
      std::memcpy(cfg.root_secret.data(), config->root_secret, 32);
    }
    cfg.debug_platform = config->debug_platform != 0;
  }
  if (!cfg.valid()) return invalid_arg("invalid platform config");
  *out = new cove_platform{Platform(std::move(cfg))};
  return COVE_OK;
}

void cove_platform_destroy(cove_platform* platform) { delete platform; }

cove_status cove_platform_boot(cove_platform* platform) {
  if (platform == nullptr) return invalid_arg("platform is null");
  AbiStatus s = platform->impl.boot();
  if (s != AbiStatus::Ok) {
    set_error(to_string(s));
    return COVE_ERR_STATE;
  }
  return COVE_OK;
}

cove_status cove_teecall(cove_platform* platform, uint32_t hart, uint64_t fn,
                         const uint64_t args[6], uint64_t ret[7]) {
  if (platform == nullptr || ret == nullptr) {
    return invalid_arg("null argument");
  }
  if (hart >= platform->impl.hart_count()) return invalid_arg("bad hart id");
  CovhCall call;
  call.fn = fn;
  if (args != nullptr) std::copy(args, args + 6, call.args.begin());
  CovhResult r = platform->impl.covh(hart, call);
  if (r.refused.has_value()) {
    set_error(to_string(*r.refused));
    return COVE_ERR_STATE;
  }
  ret[0] = static_cast<uint64_t>(r.response.status);
  std::copy(r.response.values.begin(), r.response.values.end(), ret + 1);
  return COVE_OK;
}

cove_status cove_teecall_create_vcpu(cove_platform* platform, uint32_t hart,
                                     uint64_t tvm, uint64_t vcpu,
                                     uint64_t backing_addr,
                                     uint64_t backing_count,
                                     const cove_program* program,
                                     uint64_t ret[7]) {
  if (platform == nullptr || ret == nullptr) {
    return invalid_arg("null argument");
  }
  if (hart >= platform->impl.hart_count()) return invalid_arg("bad hart id");
  CovhCall call;
  call.fn = kCovhCreateVcpu;
  call.args = {tvm, vcpu, backing_addr, backing_count, 0, 0};
  if (program != nullptr) call.program = &program->actions;
  CovhResult r = platform->impl.covh(hart, call);
  if (r.refused.has_value()) {
    set_error(to_string(*r.refused));
    return COVE_ERR_STATE;
  }
  ret[0] = static_cast<uint64_t>(r.response.status);
  std::copy(r.response.values.begin(), r.response.values.end(), ret + 1);
  return COVE_OK;
}

cove_status cove_host_access(cove_platform* platform, uint32_t hart,
                             uint64_t addr, cove_access_kind kind,
                             uint64_t store_value, cove_access_result* out) {
  if (platform == nullptr || out == nullptr) return invalid_arg("null argument");
  if (hart >= platform->impl.hart_count()) return invalid_arg("bad hart id");
  AccessResult r =
      platform->impl.host_access(hart, addr, to_access_kind(kind), store_value);
  std::memset(out, 0, sizeof(*out));
  if (r.unaligned) {
    out->unaligned = 1;
  } else if (r.exception.has_value()) {
    out->fault = to_exc_code(r.exception->kind);
  } else {
    out->ok = 1;
    out->value = r.value.value_or(0);
  }
  return COVE_OK;
}

cove_status cove_inject_interrupt(cove_platform* platform, uint64_t tvm,
                                  uint64_t vcpu, uint32_t irq,
                                  uint64_t* abi_status) {
  if (platform == nullptr || abi_status == nullptr) {
    return invalid_arg("null argument");
  }
  *abi_status =
      static_cast<uint64_t>(platform->impl.inject_interrupt(tvm, vcpu, irq));
  return COVE_OK;
}

cove_status cove_guest_touch(cove_platform* platform, uint32_t hart,
                             uint64_t tvm, uint64_t vcpu,
                             cove_access_kind kind, uint64_t gpa,
                             uint64_t store_value, cove_guest_result* out) {
  if (platform == nullptr || out == nullptr) return invalid_arg("null argument");
  if (hart >= platform->impl.hart_count()) return invalid_arg("bad hart id");
  GuestActionResult r = platform->impl.guest_action(
      hart, tvm, vcpu, Action::touch(to_access_kind(kind), gpa, store_value));
  fill_guest_result(r, out);
  return COVE_OK;
}

cove_status cove_guest_covg(cove_platform* platform, uint32_t hart,
                            uint64_t tvm, uint64_t vcpu, uint64_t fn,
                            uint64_t arg0, uint64_t arg1,
                            const uint8_t report_data[64],
                            cove_guest_result* out) {
  if (platform == nullptr || out == nullptr) return invalid_arg("null argument");
  if (hart >= platform->impl.hart_count()) return invalid_arg("bad hart id");
  Action action = Action::covg(fn, arg0, arg1);
  if (report_data != nullptr) {
    std::copy(report_data, report_data + 64, action.report_data.begin());
  }
  GuestActionResult r = platform->impl.guest_action(hart, tvm, vcpu, action);
  fill_guest_result(r, out);
  return COVE_OK;
}

cove_status cove_program_create(cove_program** out) {
  if (out == nullptr) return invalid_arg("out is null");
  *out = new cove_program;
  return COVE_OK;
}

void cove_program_destroy(cove_program* program) { delete program; }

cove_status cove_program_touch(cove_program* program, cove_access_kind kind,
                               uint64_t gpa, uint64_t value) {
  if (program == nullptr) return invalid_arg("program is null");
  program->actions.push_back(Action::touch(to_access_kind(kind), gpa, value));
  return COVE_OK;
}

cove_status cove_program_covg(cove_program* program, uint64_t fn,
                              uint64_t arg0, uint64_t arg1,
                              const uint8_t report_data[64]) {
  if (program == nullptr) return invalid_arg("program is null");
  Action action = Action::covg(fn, arg0, arg1);
  if (report_data != nullptr) {
    std::copy(report_data, report_data + 64, action.report_data.begin());
  }
  program->actions.push_back(action);
  return COVE_OK;
}

cove_status cove_program_wfi(cove_program* program) {
  if (program == nullptr) return invalid_arg("program is null");
  program->actions.push_back(Action::wfi());
  return COVE_OK;
}

cove_status cove_program_exit(cove_program* program, uint64_t code) {
  if (program == nullptr) return invalid_arg("program is null");
  program->actions.push_back(Action::exit(code));
  return COVE_OK;
}

cove_status cove_platform_root_public_key(const cove_platform* platform,
                                          uint8_t out[32]) {
  if (platform == nullptr || out == nullptr) return invalid_arg("null argument");
  if (!platform->impl.booted()) {
    set_error("platform not booted");
    return COVE_ERR_STATE;
  }
  std::memcpy(out, platform->impl.root_public_key().data(), 32);
  return COVE_OK;
}

cove_status cove_platform_measurements(const cove_platform* platform,
                                       uint8_t tsm_driver_digest[32],
                                       uint8_t tsm_digest[32],
                                       uint64_t* tsm_version,
                                       int* debug_platform) {
  if (platform == nullptr) return invalid_arg("platform is null");
  if (!platform->impl.booted()) {
    set_error("platform not booted");
    return COVE_ERR_STATE;
  }
  const TcbMeasurements& m = platform->impl.measurements();
  if (tsm_driver_digest != nullptr) {
    std::memcpy(tsm_driver_digest, m.tsm_driver_digest.data(), 32);
  }
  if (tsm_digest != nullptr) std::memcpy(tsm_digest, m.tsm_digest.data(), 32);
  if (tsm_version != nullptr) *tsm_version = m.tsm_version;
  if (debug_platform != nullptr) *debug_platform = m.debug_platform ? 1 : 0;
  return COVE_OK;
}

cove_status cove_platform_last_evidence(const cove_platform* platform,
                                        uint8_t* buf, size_t cap,
                                        size_t* len) {
  if (platform == nullptr || len == nullptr) return invalid_arg("null argument");
  const attest::AttestationEvidence* ev = platform->impl.last_evidence();
  if (ev == nullptr) {
    set_error("no evidence issued yet");
    return COVE_ERR_NOT_FOUND;
  }
  std::vector<uint8_t> wire = attest::serialize_evidence(*ev);
  *len = wire.size();
  if (buf == nullptr) return COVE_OK;
  if (cap < wire.size()) return invalid_arg("buffer too small");
  std::memcpy(buf, wire.data(), wire.size());
  return COVE_OK;
}

size_t cove_scenario_count(void) {
  return scenario::builtin_scenarios().size();
}

const char* cove_scenario_name(size_t index) {
  auto all = scenario::builtin_scenarios();
  return index < all.size() ? all[index].name : nullptr;
}

const char* cove_scenario_text(const char* name) {
  if (name == nullptr) return nullptr;
  return scenario::find_builtin_scenario(name);
}

cove_status cove_scenario_run(const char* text, cove_report** out) {
  if (text == nullptr || out == nullptr) return invalid_arg("null argument");
  return run_parsed(text, out);
}

cove_status cove_scenario_run_file(const char* path, cove_report** out) {
  if (path == nullptr || out == nullptr) return invalid_arg("null argument");
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    set_error(std::string("cannot read ") + path);
    return COVE_ERR_IO;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_parsed(buf.str(), out);
}

void cove_report_destroy(cove_report* report) { delete report; }

const char* cove_report_scenario_name(const cove_report* report) {
  return report != nullptr ? report->impl.scenario_name.c_str() : nullptr;
}

const char* cove_report_summary(const cove_report* report) {
  return report != nullptr ? report->summary.c_str() : nullptr;
}

size_t cove_report_steps(const cove_report* report) {
  return report != nullptr ? report->impl.steps_run : 0;
}

size_t cove_report_failure_count(const cove_report* report) {
  return report != nullptr ? report->failure_texts.size() : 0;
}

const char* cove_report_failure(const cove_report* report, size_t index) {
  if (report == nullptr || index >= report->failure_texts.size()) {
    return nullptr;
  }
  return report->failure_texts[index].c_str();
}

size_t cove_report_violation_count(const cove_report* report) {
  return report != nullptr ? report->impl.invariant_violations.size() : 0;
}

const char* cove_report_violation(const cove_report* report, size_t index) {
  if (report == nullptr || index >= report->impl.invariant_violations.size()) {
    return nullptr;
  }
  return report->impl.invariant_violations[index].c_str();
}

size_t cove_report_trace_count(const cove_report* report) {
  return report != nullptr ? report->impl.trace_lines.size() : 0;
}

const char* cove_report_trace_line(const cove_report* report, size_t index) {
  if (report == nullptr || index >= report->impl.trace_lines.size()) {
    return nullptr;
  }
  return report->impl.trace_lines[index].c_str();
}

const char* cove_report_root_public_key_hex(const cove_report* report) {
  return report != nullptr ? report->impl.root_public_key_hex.c_str()
                           : nullptr;
}

cove_status cove_report_evidence(const cove_report* report,
                                 const uint8_t** data, size_t* len) {
  if (report == nullptr || data == nullptr || len == nullptr) {
    return invalid_arg("null argument");
  }
  if (report->impl.last_evidence.empty()) {
    set_error("scenario issued no evidence");
    return COVE_ERR_NOT_FOUND;
  }
  *data = report->impl.last_evidence.data();
  *len = report->impl.last_evidence.size();
  return COVE_OK;
}

cove_status cove_fuzz_run(uint64_t seed, uint64_t ops,
                          uint32_t illegal_bias_pct, cove_fuzz_report** out) {
  if (out == nullptr) return invalid_arg("out is null");
  if (ops == 0 || illegal_bias_pct > 100) {
    return invalid_arg("ops must be >= 1 and bias <= 100");
  }
  scenario::FuzzOptions options;
  options.seed = seed;
  options.ops = ops;
  options.illegal_bias_pct = illegal_bias_pct;
  auto* report = new cove_fuzz_report;
  report->impl = scenario::run_fuzz(options);
  report->summary = report->impl.summary();
  *out = report;
  return COVE_OK;
}

void cove_fuzz_report_destroy(cove_fuzz_report* report) { delete report; }

const char* cove_fuzz_summary(const cove_fuzz_report* report) {
  return report != nullptr ? report->summary.c_str() : nullptr;
}

uint64_t cove_fuzz_ops_executed(const cove_fuzz_report* report) {
  return report != nullptr ? report->impl.ops_executed : 0;
}

uint64_t cove_fuzz_violation_count(const cove_fuzz_report* report) {
  return report != nullptr ? report->impl.violation_count : 0;
}

const char* cove_fuzz_violation(const cove_fuzz_report* report, size_t index) {
  if (report == nullptr || index >= report->impl.violations.size()) {
    return nullptr;
  }
  return report->impl.violations[index].c_str();
}

cove_status cove_evidence_verify(const uint8_t* evidence, size_t evidence_len,
                                 const uint8_t root_public_key[32],
                                 const cove_verify_policy* policy,
                                 int* accepted, char reason[32]) {
  if (evidence == nullptr || root_public_key == nullptr ||
      accepted == nullptr) {
    return invalid_arg("null argument");
  }
  attest::VerifyPolicy p;
  if (policy != nullptr) {
    auto digest = [](const uint8_t* ptr) {
      crypto::Digest d;
      std::memcpy(d.data(), ptr, 32);
      return d;
    };
    if (policy->expected_tsm_driver_digest != nullptr) {
      p.expected_tsm_driver_digest = digest(policy->expected_tsm_driver_digest);
    }
    if (policy->expected_tsm_digest != nullptr) {
      p.expected_tsm_digest = digest(policy->expected_tsm_digest);
    }
    if (policy->expected_tvm_measurement != nullptr) {
      p.expected_tvm_measurement = digest(policy->expected_tvm_measurement);
    }
    p.allow_debug = policy->allow_debug != 0;
  }
  crypto::PublicKey root;
  std::memcpy(root.data(), root_public_key, 32);

  attest::Verdict verdict;
  auto parsed = attest::parse_evidence({evidence, evidence_len});
  if (!parsed.has_value()) {
    verdict = attest::Verdict::reject(attest::RejectReason::ChainBroken);
  } else {
    verdict = attest::verify_evidence(*parsed, root, p);
  }
  *accepted = verdict.accepted ? 1 : 0;
  if (reason != nullptr) {
    const char* text = verdict.accepted ? "" : to_string(*verdict.reason);
    std::snprintf(reason, 32, "%s", text);
  }
  return COVE_OK;
}

cove_status cove_evidence_dump(const uint8_t* evidence, size_t evidence_len,
                               char** text) {
  if (evidence == nullptr || text == nullptr) {
    return invalid_arg("null argument");
  }
  auto parsed = attest::parse_evidence({evidence, evidence_len});
  if (!parsed.has_value()) {
    set_error("malformed evidence");
    return COVE_ERR_PARSE;
  }
  std::string dump = attest::evidence_to_text(*parsed);
  *text = static_cast<char*>(std::malloc(dump.size() + 1));
  std::memcpy(*text, dump.c_str(), dump.size() + 1);
  return COVE_OK;
}

void cove_string_free(char* text) { std::free(text); }

}  // extern "C"
