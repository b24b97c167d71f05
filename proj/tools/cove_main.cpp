// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.
//
// cove: scenario runner, ABI fuzzer, and attestation verifier for the
// cove-sim platform. Links only the public C API.

#include <CLI11.hpp>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cove/cove.h"

namespace {

std::optional<std::vector<uint8_t>> parse_hex(const std::string& text) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  if (compact.size() % 2 != 0) return std::nullopt;
  std::vector<uint8_t> out;
  for (size_t i = 0; i < compact.size(); i += 2) {
    int hi = nibble(compact[i]);
    int lo = nibble(compact[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<uint8_t>(hi << 4 | lo));
  }
  return out;
}

std::optional<std::vector<uint8_t>> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

bool write_file(const std::string& path, const void* data, size_t len) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
  return out.good();
}

// 32-byte key material: raw bytes or hex text.
std::optional<std::vector<uint8_t>> read_key32(const std::string& path) {
  auto bytes = read_file(path);
  if (!bytes.has_value()) return std::nullopt;
  if (bytes->size() == 32) return bytes;
  auto hex = parse_hex(std::string(bytes->begin(), bytes->end()));
  if (hex.has_value() && hex->size() == 32) return hex;
  return std::nullopt;
}

int cmd_run(const std::string& scenario, const std::string& trace_path,
            const std::string& evidence_out, const std::string& root_key_out) {
  cove_report* report = nullptr;
  cove_status status;
  if (std::ifstream(scenario).good()) {
    status = cove_scenario_run_file(scenario.c_str(), &report);
  } else if (const char* text = cove_scenario_text(scenario.c_str())) {
    status = cove_scenario_run(text, &report);
  } else {
    std::cerr << "error: no such file or bundled scenario: " << scenario
              << "\n";
    return 2;
  }
  if (status != COVE_OK) {
    std::cerr << "error: " << cove_last_error() << "\n";
    return 2;
  }

  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) {
      std::cerr << "error: cannot write " << trace_path << "\n";
      cove_report_destroy(report);
      return 2;
    }
    for (size_t i = 0; i < cove_report_trace_count(report); ++i) {
      out << cove_report_trace_line(report, i) << "\n";
    }
  }
  if (!evidence_out.empty()) {
    const uint8_t* data = nullptr;
    size_t len = 0;
    if (cove_report_evidence(report, &data, &len) != COVE_OK) {
      std::cerr << "error: the scenario issued no attestation evidence\n";
      cove_report_destroy(report);
      return 2;
    }
    if (!write_file(evidence_out, data, len)) {
      std::cerr << "error: cannot write " << evidence_out << "\n";
      cove_report_destroy(report);
      return 2;
    }
  }
  if (!root_key_out.empty()) {
    const char* hex = cove_report_root_public_key_hex(report);
    std::string line = std::string(hex != nullptr ? hex : "") + "\n";
    if (line.size() < 2 || !write_file(root_key_out, line.data(), line.size())) {
      std::cerr << "error: cannot write " << root_key_out << "\n";
      cove_report_destroy(report);
      return 2;
    }
  }

  std::cout << cove_report_summary(report) << "\n";
  for (size_t i = 0; i < cove_report_failure_count(report); ++i) {
    std::cout << "FAIL " << cove_report_failure(report, i) << "\n";
  }
  for (size_t i = 0; i < cove_report_violation_count(report); ++i) {
    std::cout << "INVARIANT " << cove_report_violation(report, i) << "\n";
  }
  bool ok = cove_report_failure_count(report) == 0 &&
            cove_report_violation_count(report) == 0;
  cove_report_destroy(report);
  return ok ? 0 : 1;
}

int cmd_fuzz(uint64_t seed, uint64_t ops, uint32_t bias) {
  cove_fuzz_report* report = nullptr;
  if (cove_fuzz_run(seed, ops, bias, &report) != COVE_OK) {
    std::cerr << "error: " << cove_last_error() << "\n";
    return 2;
  }
  std::cout << cove_fuzz_summary(report) << "\n";
  uint64_t violations = cove_fuzz_violation_count(report);
  for (size_t i = 0; cove_fuzz_violation(report, i) != nullptr; ++i) {
    std::cout << "VIOLATION " << cove_fuzz_violation(report, i) << "\n";
  }
  cove_fuzz_report_destroy(report);
  return violations == 0 ? 0 : 1;
}

int cmd_attest_verify(const std::string& evidence_path,
                      const std::string& root_key_path, bool allow_debug,
                      const std::string& expect_measurement,
                      const std::string& expect_tsm_digest,
                      const std::string& expect_driver_digest, bool dump) {
  auto evidence = read_file(evidence_path);
  if (!evidence.has_value()) {
    std::cerr << "error: cannot read " << evidence_path << "\n";
    return 2;
  }
  auto root = read_key32(root_key_path);
  if (!root.has_value()) {
    std::cerr << "error: " << root_key_path
              << " is not a 32-byte key (raw or hex)\n";
    return 2;
  }

  cove_verify_policy policy{};
  policy.allow_debug = allow_debug ? 1 : 0;
  auto digest_arg = [](const std::string& hex, const char* what)
      -> std::optional<std::vector<uint8_t>> {
    if (hex.empty()) return std::vector<uint8_t>{};
    auto bytes = parse_hex(hex);
    if (!bytes.has_value() || bytes->size() != 32) {
      std::cerr << "error: " << what << " must be 32 hex-encoded bytes\n";
      return std::nullopt;
    }
    return bytes;
  };
  auto measurement = digest_arg(expect_measurement, "--expect-measurement");
  auto tsm_digest = digest_arg(expect_tsm_digest, "--expect-tsm-digest");
  auto driver_digest =
      digest_arg(expect_driver_digest, "--expect-driver-digest");
  if (!measurement || !tsm_digest || !driver_digest) return 2;
  if (!measurement->empty()) policy.expected_tvm_measurement = measurement->data();
  if (!tsm_digest->empty()) policy.expected_tsm_digest = tsm_digest->data();
  if (!driver_digest->empty()) {
    policy.expected_tsm_driver_digest = driver_digest->data();
  }

  if (dump) {
    char* text = nullptr;
    if (cove_evidence_dump(evidence->data(), evidence->size(), &text) ==
        COVE_OK) {
      std::cout << text;
      cove_string_free(text);
    } else {
      std::cout << "(evidence not decodable)\n";
    }
  }

  int accepted = 0;
  char reason[32];
  if (cove_evidence_verify(evidence->data(), evidence->size(), root->data(),
                           &policy, &accepted, reason) != COVE_OK) {
    std::cerr << "error: " << cove_last_error() << "\n";
    return 2;
  }
  if (accepted != 0) {
    std::cout << "Accept\n";
    return 0;
  }
  std::cout << "Reject(" << reason << ")\n";
  return 1;
}

int cmd_list() {
  for (size_t i = 0; i < cove_scenario_count(); ++i) {
    std::cout << cove_scenario_name(i) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cove-sim: RISC-V CoVE confidential-computing platform simulator"};
  app.require_subcommand(1);

  std::string scenario, trace_path, evidence_out, root_key_out;
  auto* run = app.add_subcommand(
      "run", "Run a scenario file or a bundled scenario by name");
  run->add_option("scenario", scenario, "Scenario file path or bundled name")
      ->required();
  run->add_option("--trace", trace_path, "Write the JSONL trace here");
  run->add_option("--evidence-out", evidence_out,
                  "Write the last attestation evidence (binary) here");
  run->add_option("--root-key-out", root_key_out,
                  "Write the platform root public key (hex) here");

  uint64_t seed = 1, ops = 1000;
  uint32_t bias = 20;
  auto* fuzz = app.add_subcommand(
      "fuzz", "Run seed-deterministic ABI fuzzing with invariant checks");
  fuzz->add_option("--seed", seed, "RNG seed")->capture_default_str();
  fuzz->add_option("--ops", ops, "Number of ABI calls")->capture_default_str();
  fuzz->add_option("--illegal-bias", bias,
                   "Percentage of deliberately illegal calls")
      ->capture_default_str()
      ->check(CLI::Range(0, 100));

  std::string evidence_path, root_key_path, expect_measurement;
  std::string expect_tsm_digest, expect_driver_digest;
  bool allow_debug = false, dump = false;
  auto* verify = app.add_subcommand(
      "attest-verify", "Verify serialized attestation evidence");
  verify->add_option("--evidence", evidence_path, "Evidence file (binary)")
      ->required();
  verify->add_option("--root-key", root_key_path,
                     "Trusted root public key file (raw 32 bytes or hex)")
      ->required();
  verify->add_flag("--allow-debug", allow_debug,
                   "Accept evidence from debug-enabled TVMs/platforms");
  verify->add_option("--expect-measurement", expect_measurement,
                     "Required TVM measurement (hex)");
  verify->add_option("--expect-tsm-digest", expect_tsm_digest,
                     "Required TSM digest (hex)");
  verify->add_option("--expect-driver-digest", expect_driver_digest,
                     "Required TSM-driver digest (hex)");
  verify->add_flag("--dump", dump, "Print the decoded certificate chain");

  auto* list = app.add_subcommand("list-scenarios", "List bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return cmd_run(scenario, trace_path, evidence_out, root_key_out);
  }
  if (fuzz->parsed()) return cmd_fuzz(seed, ops, bias);
  if (verify->parsed()) {
    return cmd_attest_verify(evidence_path, root_key_path, allow_debug,
                             expect_measurement, expect_tsm_digest,
                             expect_driver_digest, dump);
  }
  if (list->parsed()) return cmd_list();
  return 2;
}
