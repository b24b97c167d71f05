// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. Each criterion pins its thresholds and time budget in code.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "core/platform.hpp"
#include "scenario/builtin.hpp"
#include "scenario/fuzz.hpp"
#include "scenario/runner.hpp"
#include "support/ref_oracles.hpp"
#include "support/ref_sha256.hpp"

using namespace cove;
using namespace cove::testing;

namespace {

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;  // 0 = no stated budget
  std::function<bool(std::string&)> run;
};

uint64_t A(uint64_t page) { return page * kPageSize; }

CovhCall call(uint64_t fn, std::initializer_list<uint64_t> args,
              const TvmProgram* program = nullptr) {
  CovhCall c;
  c.fn = fn;
  size_t i = 0;
  for (uint64_t a : args) c.args[i++] = a;
  c.program = program;
  return c;
}

bool covh_ok(Platform& p, uint64_t fn, std::initializer_list<uint64_t> args,
             const TvmProgram* program = nullptr) {
  return p.covh(0, call(fn, args, program)).status() == AbiStatus::Ok;
}

// ---------------------------------------------------------------------------
// 1. Host-exclusion exhaustive check over a 64-page platform.
// ---------------------------------------------------------------------------
bool criterion_host_exclusion(std::string& detail) {
  PhysicalMemory mem(64);
  MemoryTracker mtt(mem);

  // Install every reachable entry shape cyclically across all 64 pages.
  struct Shape {
    PageState state;
    std::optional<PageOwner> owner;
    PageUse use;
  };
  std::vector<Shape> shapes = {{PageState::NonConfidential, {}, PageUse::TvmData},
                               {PageState::ConfidentialFree, {}, PageUse::TvmData}};
  for (PageOwner owner :
       {PageOwner::of_tvm(1), PageOwner::of_tvm(2), PageOwner::tsm()}) {
    for (PageUse use : {PageUse::TvmData, PageUse::TvmState, PageUse::VcpuState,
                        PageUse::GStageTable, PageUse::InterruptFile,
                        PageUse::TsmInternal}) {
      shapes.push_back({PageState::ConfidentialAssigned, owner, use});
    }
  }
  for (uint64_t p = 0; p < 64; ++p) {
    const Shape& s = shapes[p % shapes.size()];
    if (s.state != PageState::NonConfidential) {
      mtt.convert_range(PageAddr{p}, 1);
    }
    if (s.state == PageState::ConfidentialAssigned) {
      mtt.assign_page(PageAddr{p}, *s.owner, s.use);
    }
  }

  std::vector<AccessContext> contexts;
  for (AccessKind k : {AccessKind::Load, AccessKind::Store, AccessKind::Fetch,
                       AccessKind::PageWalk}) {
    contexts.push_back(AccessContext::host(k));
    contexts.push_back(AccessContext::tsm(k));
    contexts.push_back(AccessContext::of_tvm(1, k));
    contexts.push_back(AccessContext::of_tvm(2, k));
    contexts.push_back(AccessContext::of_tvm(3, k));  // owns nothing
  }

  uint64_t checked = 0, mismatches = 0;
  for (uint64_t p = 0; p < 64; ++p) {
    const MttEntry& e = mtt.entry(PageAddr{p});
    for (const AccessContext& ctx : contexts) {
      bool got = mtt.check(PageAddr{p}, ctx).allow;
      bool want = oracle_allows(e.state, e.owner, ctx);
      ++checked;
      if (got != want) ++mismatches;
    }
  }
  std::ostringstream os;
  os << checked << " combinations, " << mismatches << " mismatches";
  detail = os.str();
  return mismatches == 0 && checked == 64 * contexts.size();
}

// ---------------------------------------------------------------------------
// 2. Lifecycle conformance: happy path plus adjacent out-of-order swaps.
// ---------------------------------------------------------------------------
bool criterion_lifecycle(std::string& detail) {
  const char* text = scenario::find_builtin_scenario("lifecycle_happy_path");
  if (text == nullptr) {
    detail = "bundled scenario missing";
    return false;
  }
  auto parsed = scenario::parse_scenario(text);
  if (!std::holds_alternative<scenario::Scenario>(parsed)) {
    detail = "happy path does not parse";
    return false;
  }
  scenario::Report report =
      scenario::run_scenario(std::get<scenario::Scenario>(parsed));
  if (!report.ok()) {
    detail = "happy path: " + (report.failures.empty()
                                   ? report.invariant_violations[0]
                                   : report.failures[0].actual);
    return false;
  }

  // The documented order is add_measured_pages, finalize, run. Each adjacent
  // transposition must produce WrongPhase at the out-of-order call.
  auto build_base = [](Platform& p, const TvmProgram& prog) {
    return covh_ok(p, kCovhConvertPages, {A(16), 8}) &&
           covh_ok(p, kCovhTvmCreate, {A(16), 1, 0}) &&
           covh_ok(p, kCovhAddPageTablePages, {0, A(17), 1}) &&
           covh_ok(p, kCovhAddMemoryRegion, {0, 0, 0x8000'0000, 8}) &&
           covh_ok(p, kCovhCreateVcpu, {0, 0, A(18), 1}, &prog);
  };
  TvmProgram prog{Action::exit(0)};

  {  // Swap 1: finalize before add_measured_pages.
    Platform p(PlatformConfig::defaults());
    if (p.boot() != AbiStatus::Ok || !build_base(p, prog)) {
      detail = "setup failed";
      return false;
    }
    if (!covh_ok(p, kCovhFinalize, {0})) {
      detail = "finalize rejected in swap 1";
      return false;
    }
    p.memory().page(PageAddr{2})[0] = 0x11;
    auto r = p.covh(0, call(kCovhAddMeasuredPages, {0, A(2), A(19), 0x8000'0000}));
    if (r.status() != AbiStatus::WrongPhase) {
      detail = "measured add after finalize did not return wrong_phase";
      return false;
    }
    if (p.covh(0, call(kCovhRun, {0, 0})).status() != AbiStatus::Ok) {
      detail = "run after finalize failed in swap 1";
      return false;
    }
  }
  {  // Swap 2: run before finalize.
    Platform p(PlatformConfig::defaults());
    if (p.boot() != AbiStatus::Ok || !build_base(p, prog)) {
      detail = "setup failed";
      return false;
    }
    p.memory().page(PageAddr{2})[0] = 0x11;
    if (!covh_ok(p, kCovhAddMeasuredPages, {0, A(2), A(19), 0x8000'0000})) {
      detail = "measured add rejected in swap 2";
      return false;
    }
    auto r = p.covh(0, call(kCovhRun, {0, 0}));
    if (r.status() != AbiStatus::WrongPhase) {
      detail = "run before finalize did not return wrong_phase";
      return false;
    }
    if (!covh_ok(p, kCovhFinalize, {0})) {
      detail = "finalize rejected in swap 2";
      return false;
    }
  }
  std::ostringstream os;
  os << report.steps_run << " happy-path steps, both adjacent swaps rejected";
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// 3. Ownership-oracle fuzz: 100k ops across 3 seeds.
// ---------------------------------------------------------------------------
bool criterion_fuzz(std::string& detail) {
  uint64_t total = 0;
  for (uint64_t seed : {1, 2, 3}) {
    scenario::FuzzOptions options;
    options.seed = seed;
    options.ops = 100'000;
    scenario::FuzzReport report = scenario::run_fuzz(options);
    total += report.ops_executed;
    if (!report.ok()) {
      detail = "seed " + std::to_string(seed) + ": " + report.violations[0];
      return false;
    }
  }
  detail = std::to_string(total) + " ops, 0 divergences";
  return true;
}

// ---------------------------------------------------------------------------
// 4. Scrub property over randomized lifecycle cycles.
// ---------------------------------------------------------------------------
bool criterion_scrub(std::string& detail) {
  std::mt19937_64 rng(0x5C12B);
  Platform p(PlatformConfig::defaults());
  if (p.boot() != AbiStatus::Ok) {
    detail = "boot failed";
    return false;
  }
  const uint64_t gpa = 0x8000'0000;
  for (int cycle = 0; cycle < 1000; ++cycle) {
    uint64_t base = 16 + (rng() % 60) * 3;   // three fresh pages per cycle
    uint64_t data_page = 200 + rng() % 50;   // disjoint from the base range
    uint64_t sentinel = rng() | 0x1;

    if (!covh_ok(p, kCovhConvertPages, {A(base), 3})) {
      detail = "convert failed in cycle " + std::to_string(cycle);
      return false;
    }
    auto created = p.covh(0, call(kCovhTvmCreate, {A(base), 1, 0}));
    if (created.status() != AbiStatus::Ok) {
      detail = "create failed";
      return false;
    }
    TvmId id = created.response.values[0];
    TvmProgram prog{Action::touch(AccessKind::Store, gpa, sentinel),
                    Action::touch(AccessKind::Store, gpa + 2048, ~sentinel),
                    Action::exit(0)};
    if (!covh_ok(p, kCovhAddPageTablePages, {id, A(base + 1), 1}) ||
        !covh_ok(p, kCovhAddMemoryRegion, {id, 0, gpa, 4}) ||
        !covh_ok(p, kCovhCreateVcpu, {id, 0, A(base + 2), 1}, &prog) ||
        !covh_ok(p, kCovhFinalize, {id})) {
      detail = "build failed in cycle " + std::to_string(cycle);
      return false;
    }
    // Map the data page on demand, run the sentinel writes, tear down.
    auto run1 = p.covh(0, call(kCovhRun, {id, 0}));
    if (!covh_ok(p, kCovhConvertPages, {A(data_page), 1}) ||
        !covh_ok(p, kCovhAddZeroPages, {id, A(data_page), gpa}) ||
        p.covh(0, call(kCovhRun, {id, 0})).response.values[0] !=
            static_cast<uint64_t>(TvmExit::Reason::Halted)) {
      detail = "run failed in cycle " + std::to_string(cycle);
      return false;
    }
    (void)run1;
    if (!covh_ok(p, kCovhDestroy, {id})) {
      detail = "destroy failed";
      return false;
    }

    if (cycle % 2 == 0) {
      // Reassign the data page to a second TVM and read it from inside.
      auto second = p.covh(0, call(kCovhTvmCreate, {A(base), 1, 0}));
      TvmId id2 = second.response.values[0];
      TvmProgram probe{Action::exit(0)};
      if (second.status() != AbiStatus::Ok ||
          !covh_ok(p, kCovhAddPageTablePages, {id2, A(base + 1), 1}) ||
          !covh_ok(p, kCovhAddMemoryRegion, {id2, 0, gpa, 4}) ||
          !covh_ok(p, kCovhCreateVcpu, {id2, 0, A(base + 2), 1}, &probe) ||
          !covh_ok(p, kCovhFinalize, {id2}) ||
          !covh_ok(p, kCovhReassignPages, {id2, A(data_page), gpa})) {
        detail = "reassign path failed in cycle " + std::to_string(cycle);
        return false;
      }
      for (uint64_t off = 0; off < kPageSize; off += 8) {
        auto read = p.guest_action(0, id2, 0,
                                   Action::touch(AccessKind::Load, gpa + off));
        if (!read.value.has_value() || *read.value != 0) {
          detail = "second TVM observed a leaked byte";
          return false;
        }
      }
      if (!covh_ok(p, kCovhDestroy, {id2}) ||
          !covh_ok(p, kCovhReclaimPages, {A(base), 3}) ||
          !covh_ok(p, kCovhReclaimPages, {A(data_page), 1})) {
        detail = "teardown failed";
        return false;
      }
    } else {
      // Reclaim everything and read it back as the host.
      if (!covh_ok(p, kCovhReclaimPages, {A(base), 3}) ||
          !covh_ok(p, kCovhReclaimPages, {A(data_page), 1})) {
        detail = "reclaim failed in cycle " + std::to_string(cycle);
        return false;
      }
      for (uint64_t page : {base, base + 1, base + 2, data_page}) {
        for (uint64_t off = 0; off < kPageSize; off += 8) {
          auto read = p.host_access(0, A(page) + off, AccessKind::Load);
          if (!read.value.has_value() || *read.value != 0) {
            detail = "host observed a leaked byte post-reclaim";
            return false;
          }
        }
      }
    }
  }
  detail = "1000 cycles, no leaked bytes";
  return true;
}

// ---------------------------------------------------------------------------
// 5. Context isolation across 10k TEECALL round trips.
// ---------------------------------------------------------------------------
bool criterion_context_isolation(std::string& detail) {
  Platform p(PlatformConfig::defaults());
  if (p.boot() != AbiStatus::Ok) {
    detail = "boot failed";
    return false;
  }
  std::mt19937_64 rng(0x15014);
  Hart& hart = p.hart(0);
  uint64_t leaks = 0, clobbered = 0;

  for (int round = 0; round < 10'000; ++round) {
    std::array<uint64_t, kGprCount> before{};
    for (uint32_t i = 1; i < kGprCount; ++i) {
      before[i] = rng();
      hart.write_gpr(i, before[i]);
    }
    uint64_t sentinel = rng() | 1;
    p.driver().set_tsm_scratch_hook([&](Hart& h) {
      for (int k = 0; k < 6; ++k) {
        h.write_gpr(1 + static_cast<uint32_t>(rng() % (kGprCount - 1)),
                    sentinel);
      }
    });
    auto r = p.covh(0, call(kCovhTsmInfo, {}));
    if (r.status() != AbiStatus::Ok) {
      detail = "tsm_info failed";
      return false;
    }
    for (uint32_t i = 1; i < kGprCount; ++i) {
      bool response_reg =
          i >= kFirstResponseGpr && i < kFirstResponseGpr + kResponseGprCount;
      if (hart.read_gpr(i) == sentinel && sentinel != before[i]) ++leaks;
      if (!response_reg && hart.read_gpr(i) != before[i]) ++clobbered;
    }
  }
  p.driver().set_tsm_scratch_hook(nullptr);
  std::ostringstream os;
  os << "10000 round trips, " << leaks << " leaks, " << clobbered
     << " clobbered registers";
  detail = os.str();
  return leaks == 0 && clobbered == 0;
}

// ---------------------------------------------------------------------------
// 6. Measurement determinism and sensitivity over 1000 random builds.
// ---------------------------------------------------------------------------
struct BuildSpec {
  std::vector<std::pair<uint64_t, std::vector<uint8_t>>> pages;  // gpa, bytes
  TvmProgram program;
};

std::optional<crypto::Digest> run_build(const BuildSpec& spec) {
  Platform p(PlatformConfig::defaults());
  if (p.boot() != AbiStatus::Ok) return std::nullopt;
  if (!covh_ok(p, kCovhConvertPages, {A(16), 16}) ||
      !covh_ok(p, kCovhTvmCreate, {A(16), 1, 0}) ||
      !covh_ok(p, kCovhAddPageTablePages, {0, A(17), 1}) ||
      !covh_ok(p, kCovhAddMemoryRegion, {0, 0, 0x8000'0000, 64})) {
    return std::nullopt;
  }
  uint64_t dest = 18;
  for (const auto& [gpa, bytes] : spec.pages) {
    auto page = p.memory().page(PageAddr{2});
    std::fill(page.begin(), page.end(), uint8_t{0});
    std::copy(bytes.begin(), bytes.end(), page.begin());
    if (!covh_ok(p, kCovhAddMeasuredPages, {0, A(2), A(dest++), gpa})) {
      return std::nullopt;
    }
  }
  if (!covh_ok(p, kCovhCreateVcpu, {0, 0, A(dest), 1}, &spec.program)) {
    return std::nullopt;
  }
  auto fin = p.covh(0, call(kCovhFinalize, {0}));
  if (fin.status() != AbiStatus::Ok) return std::nullopt;
  crypto::Digest d;
  std::memcpy(d.data(), fin.response.values.data(), 32);
  return d;
}

crypto::Digest reference_digest(const BuildSpec& spec) {
  std::vector<std::pair<uint64_t, std::vector<uint8_t>>> chain;
  for (const auto& [gpa, bytes] : spec.pages) {
    std::vector<uint8_t> page(kPageSize, 0);
    std::copy(bytes.begin(), bytes.end(), page.begin());
    chain.push_back({gpa, std::move(page)});
  }
  auto vcpu_record = encode_vcpu_program(0, spec.program);
  chain.push_back({kSyntheticGpaBase | 0,
                   std::vector<uint8_t>(vcpu_record.begin(), vcpu_record.end())});
  return ref_measurement_chain(chain);
}

bool criterion_measurement(std::string& detail) {
  std::mt19937_64 rng(0x3EA5);
  std::map<std::array<uint8_t, 32>, size_t> seen;
  for (size_t build = 0; build < 1000; ++build) {
    BuildSpec spec;
    uint64_t n = 1 + rng() % 4;
    std::set<uint64_t> used;
    for (uint64_t i = 0; i < n; ++i) {
      uint64_t gpa;
      do {
        gpa = 0x8000'0000 + (rng() % 64) * kPageSize;
      } while (!used.insert(gpa).second);
      std::vector<uint8_t> bytes(64);
      for (auto& b : bytes) b = static_cast<uint8_t>(rng());
      spec.pages.push_back({gpa, std::move(bytes)});
    }
    spec.program = {Action::exit(rng() % 8)};

    auto digest = run_build(spec);
    auto again = run_build(spec);
    if (!digest.has_value() || !again.has_value()) {
      detail = "build failed at " + std::to_string(build);
      return false;
    }
    if (*digest != *again) {
      detail = "identical builds diverged at " + std::to_string(build);
      return false;
    }
    if (*digest != reference_digest(spec)) {
      detail = "digest disagrees with the reference chain at " +
               std::to_string(build);
      return false;
    }
    auto [it, fresh] = seen.insert({*digest, build});
    if (!fresh) {
      detail = "digest collision between builds";
      return false;
    }

    // Single-bit payload flip.
    BuildSpec flipped = spec;
    flipped.pages[rng() % flipped.pages.size()].second[rng() % 64] ^=
        uint8_t{1} << (rng() % 8);
    auto flipped_digest = run_build(flipped);
    if (!flipped_digest.has_value() || *flipped_digest == *digest) {
      detail = "bit flip left the digest unchanged at " + std::to_string(build);
      return false;
    }

    // Order swap (when there are at least two pages).
    if (spec.pages.size() >= 2) {
      BuildSpec swapped = spec;
      std::swap(swapped.pages[0], swapped.pages[1]);
      auto swapped_digest = run_build(swapped);
      if (!swapped_digest.has_value() || *swapped_digest == *digest) {
        detail = "order swap left the digest unchanged at " +
                 std::to_string(build);
        return false;
      }
    }
  }
  detail = "1000 builds, deterministic, bit- and order-sensitive";
  return true;
}

// ---------------------------------------------------------------------------
// 7. Attestation round trip over 1000 fuzzed platforms.
// ---------------------------------------------------------------------------
bool criterion_attestation(std::string& detail) {
  std::mt19937_64 rng(0xA77E57);
  for (int round = 0; round < 1000; ++round) {
    PlatformConfig cfg = PlatformConfig::defaults();
    cfg.tsm_blob.resize(16 + rng() % 64);
    for (auto& b : cfg.tsm_blob) b = static_cast<uint8_t>(rng());
    cfg.tsm_driver_blob.resize(16 + rng() % 64);
    for (auto& b : cfg.tsm_driver_blob) b = static_cast<uint8_t>(rng());
    for (auto& b : cfg.root_secret) b = static_cast<uint8_t>(rng());
    cfg.debug_platform = rng() % 8 == 0;
    bool debug_tvm = rng() % 4 == 0;

    Platform p(cfg);
    if (p.boot() != AbiStatus::Ok) {
      detail = "boot failed";
      return false;
    }
    TvmProgram prog{Action::exit(0)};
    if (!covh_ok(p, kCovhConvertPages, {A(16), 4}) ||
        !covh_ok(p, kCovhTvmCreate, {A(16), 1, debug_tvm ? 1u : 0u}) ||
        !covh_ok(p, kCovhCreateVcpu, {0, 0, A(17), 1}, &prog)) {
      detail = "build failed";
      return false;
    }
    auto fin = p.covh(0, call(kCovhFinalize, {0}));
    if (fin.status() != AbiStatus::Ok) {
      detail = "finalize failed";
      return false;
    }
    crypto::Digest measurement;
    std::memcpy(measurement.data(), fin.response.values.data(), 32);

    Action get = Action::covg(kCovgGetEvidence);
    for (auto& b : get.report_data) b = static_cast<uint8_t>(rng());
    if (p.guest_action(0, 0, 0, get).status != AbiStatus::Ok ||
        p.last_evidence() == nullptr) {
      detail = "evidence request failed";
      return false;
    }
    const attest::AttestationEvidence& evidence = *p.last_evidence();

    attest::VerifyPolicy policy;
    policy.expected_tsm_driver_digest = p.measurements().tsm_driver_digest;
    policy.expected_tsm_digest = p.measurements().tsm_digest;
    policy.expected_tvm_measurement = measurement;
    policy.allow_debug = cfg.debug_platform || debug_tvm;
    auto verdict =
        attest::verify_evidence(evidence, p.root_public_key(), policy);
    if (!verdict.accepted) {
      detail = "authentic evidence rejected: " + std::string(to_string(*verdict.reason));
      return false;
    }

    // Debug posture must be rejectable.
    if (cfg.debug_platform || debug_tvm) {
      attest::VerifyPolicy strict = policy;
      strict.allow_debug = false;
      auto rejected =
          attest::verify_evidence(evidence, p.root_public_key(), strict);
      if (rejected.accepted ||
          rejected.reason != attest::RejectReason::DebugForbidden) {
        detail = "debug evidence not rejected as debug_forbidden";
        return false;
      }
    }

    // Tampering: every byte for the first platform, one random byte after.
    std::vector<uint8_t> wire = attest::serialize_evidence(evidence);
    auto tampered_rejected = [&](size_t index) {
      std::vector<uint8_t> tampered = wire;
      tampered[index] ^= uint8_t{1} << (rng() % 8);
      auto parsed = attest::parse_evidence(tampered);
      if (!parsed.has_value()) return true;  // undecodable: rejected
      return !attest::verify_evidence(*parsed, p.root_public_key(), policy)
                  .accepted;
    };
    if (round == 0) {
      for (size_t i = 0; i < wire.size(); ++i) {
        if (!tampered_rejected(i)) {
          detail = "byte " + std::to_string(i) + " tamper accepted";
          return false;
        }
      }
    } else if (!tampered_rejected(rng() % wire.size())) {
      detail = "random tamper accepted in round " + std::to_string(round);
      return false;
    }
  }
  detail = "1000 platforms, exhaustive + random tamper rejected";
  return true;
}

// ---------------------------------------------------------------------------
// 8. Interrupt-file exception truth table.
// ---------------------------------------------------------------------------
bool criterion_interrupt_table(std::string& detail) {
  uint64_t checked = 0, wrong = 0;
  const TvmId owner_tvm = 5;
  // Ownership axis: the owner vcpu, another TVM, the TSM flow, plain host.
  struct Case {
    uint8_t v, c;
    HartActivation activation;
  };
  std::vector<Case> cases = {
      {0, 0, {HartActivation::Kind::Host, 0, 0}},
      {1, 0, {HartActivation::Kind::Host, 0, 0}},  // non-confidential guest
      {1, 1, {HartActivation::Kind::TvmContext, owner_tvm, 0}},
      {1, 1, {HartActivation::Kind::TvmContext, owner_tvm + 1, 0}},
      {0, 1, {HartActivation::Kind::TsmContext, 0, 0}},
  };
  for (AccessKind kind : {AccessKind::Load, AccessKind::Store}) {
    for (const Case& c : cases) {
      InterruptFile file;
      file.backing_page = PageAddr{7};
      file.bound_to = {{owner_tvm, 0}};
      file.pending = {4};
      Hart hart;
      hart.v = c.v;
      hart.c = c.c;
      hart.active = c.activation;

      auto result = interrupt_file_access(hart, file, kind, 0x10);
      ++checked;

      // Independent statement of the rule.
      std::optional<ExceptionKind> want;
      if (c.c == 0) {
        want = c.v == 0 ? ExceptionKind::IllegalInstruction
                        : ExceptionKind::VirtualInstruction;
      } else if (c.activation.kind != HartActivation::Kind::TvmContext ||
                 c.activation.tvm != owner_tvm) {
        want = ExceptionKind::AccessFault;
      }
      bool ok = want.has_value()
                    ? (result.exc.has_value() && result.exc->kind == *want)
                    : !result.exc.has_value();
      if (!ok) ++wrong;
    }
  }
  std::ostringstream os;
  os << checked << " combinations, " << wrong << " wrong exceptions";
  detail = os.str();
  return wrong == 0;
}

// ---------------------------------------------------------------------------
// 9. Demand-fault equivalence over 1000 random programs.
// ---------------------------------------------------------------------------
bool criterion_demand_fault(std::string& detail) {
  std::mt19937_64 rng(0xDE3A17D);
  for (int round = 0; round < 1000; ++round) {
    // Random program over a handful of gpas.
    TvmProgram prog;
    std::set<uint64_t> touched_pages;
    uint64_t actions = 1 + rng() % 6;
    for (uint64_t i = 0; i < actions; ++i) {
      uint64_t gpa_page = rng() % 8;
      uint64_t gpa = 0x8000'0000 + gpa_page * kPageSize + (rng() % 512) * 8;
      touched_pages.insert(gpa_page);
      if (rng() % 3 == 0) {
        prog.push_back(Action::touch(AccessKind::Load, gpa));
      } else if (rng() % 4 == 0) {
        prog.push_back(Action::wfi());
      } else {
        prog.push_back(Action::touch(AccessKind::Store, gpa, rng()));
      }
    }
    prog.push_back(Action::exit(rng() % 100));

    auto build = [&](Platform& p) {
      return p.boot() == AbiStatus::Ok &&
             covh_ok(p, kCovhConvertPages, {A(16), 24}) &&
             covh_ok(p, kCovhTvmCreate, {A(16), 1, 0}) &&
             covh_ok(p, kCovhAddPageTablePages, {0, A(17), 1}) &&
             covh_ok(p, kCovhAddMemoryRegion, {0, 0, 0x8000'0000, 8}) &&
             covh_ok(p, kCovhCreateVcpu, {0, 0, A(18), 1}, &prog) &&
             covh_ok(p, kCovhFinalize, {0});
    };

    // (a) every page the program can touch is pre-mapped.
    Platform pre(PlatformConfig::defaults());
    if (!build(pre)) {
      detail = "pre-map build failed";
      return false;
    }
    uint64_t dest = 19;
    for (uint64_t gpa_page : touched_pages) {
      if (!covh_ok(pre, kCovhAddZeroPages,
                   {0, A(dest++), 0x8000'0000 + gpa_page * kPageSize})) {
        detail = "pre-map add_zero failed";
        return false;
      }
    }
    std::optional<uint64_t> halted_a;
    for (int step = 0; step < 64 && !halted_a.has_value(); ++step) {
      auto r = pre.covh(0, call(kCovhRun, {0, 0}));
      if (r.status() != AbiStatus::Ok) {
        detail = "pre-map run failed";
        return false;
      }
      auto reason = static_cast<TvmExit::Reason>(r.response.values[0]);
      if (reason == TvmExit::Reason::Halted) halted_a = r.response.values[1];
      if (reason == TvmExit::Reason::GuestPageFault) {
        detail = "pre-mapped run faulted";
        return false;
      }
    }

    // (b) pages are added lazily on guest page faults.
    Platform lazy(PlatformConfig::defaults());
    if (!build(lazy)) {
      detail = "lazy build failed";
      return false;
    }
    dest = 19;
    std::optional<uint64_t> halted_b;
    for (int step = 0; step < 128 && !halted_b.has_value(); ++step) {
      auto r = lazy.covh(0, call(kCovhRun, {0, 0}));
      if (r.status() != AbiStatus::Ok) {
        detail = "lazy run failed";
        return false;
      }
      auto reason = static_cast<TvmExit::Reason>(r.response.values[0]);
      if (reason == TvmExit::Reason::Halted) {
        halted_b = r.response.values[1];
      } else if (reason == TvmExit::Reason::GuestPageFault) {
        if (!covh_ok(lazy, kCovhAddZeroPages,
                     {0, A(dest++), r.response.values[1] & ~(kPageSize - 1)})) {
          detail = "lazy add_zero failed";
          return false;
        }
      }
    }

    if (!halted_a.has_value() || halted_b != halted_a) {
      detail = "halt codes diverged in round " + std::to_string(round);
      return false;
    }
    // Final TVM-visible memory: compare every mapped gpa page's bytes.
    const Tvm* tvm_a = pre.tsm().find_tvm(0);
    const Tvm* tvm_b = lazy.tsm().find_tvm(0);
    for (const auto& [gpa_page, mapping] : tvm_b->gstage) {
      auto it = tvm_a->gstage.find(gpa_page);
      if (it == tvm_a->gstage.end()) {
        detail = "lazy path mapped a page the pre-map path lacks";
        return false;
      }
      auto bytes_a = pre.memory().page(it->second.spa);
      auto bytes_b = lazy.memory().page(mapping.spa);
      if (!std::equal(bytes_a.begin(), bytes_a.end(), bytes_b.begin())) {
        detail = "memory diverged at gpa page " + std::to_string(gpa_page);
        return false;
      }
    }
  }
  detail = "1000 programs, identical halt codes and memory";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "host-exclusion exhaustive check", 1.0, criterion_host_exclusion},
      {2, "lifecycle conformance", 1.0, criterion_lifecycle},
      {3, "ownership-oracle fuzz (3 x 100k ops)", 60.0, criterion_fuzz},
      {4, "scrub property (1000 cycles)", 10.0, criterion_scrub},
      {5, "context isolation (10k round trips)", 0.0,
       criterion_context_isolation},
      {6, "measurement determinism and sensitivity", 0.0,
       criterion_measurement},
      {7, "attestation round trip (1000 platforms)", 0.0,
       criterion_attestation},
      {8, "interrupt-file exception truth table", 1.0,
       criterion_interrupt_table},
      {9, "demand-fault equivalence (1000 programs)", 0.0,
       criterion_demand_fault},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = c.run(detail);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.budget_seconds > 0 && elapsed >= c.budget_seconds) {
      ok = false;
      detail += " [over time budget]";
    }
    std::printf("[%s] criterion %d: %s — %s (%.2fs)\n", ok ? "PASS" : "FAIL",
                c.number, c.name, detail.c_str(), elapsed);
    if (!ok) ++failed;
  }
  if (failed != 0) {
    std::printf("%d criterion(s) failed\n", failed);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
