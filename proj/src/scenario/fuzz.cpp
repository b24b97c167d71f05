// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "scenario/fuzz.hpp"

#include <random>
#include <sstream>

namespace cove::scenario {

namespace {

constexpr uint64_t kConfRegionGpa = 0x8000'0000;
constexpr uint64_t kConfRegionPages = 64;
constexpr uint64_t kSharedRegionGpa = 0x9000'0000;
constexpr uint64_t kSharedRegionPages = 16;
constexpr size_t kMaxRecordedViolations = 16;

struct ModelTvm {
  TvmId id = 0;
  bool runnable = false;
  uint64_t vcpus = 0;
  uint64_t capacity = 0;           // donated table slots
  std::set<uint64_t> mapped;       // gpa pages with any mapping
  std::map<uint64_t, uint64_t> shared_spas;  // shared gpa page -> spa page
  std::set<uint64_t> offered;      // gpa pages offered by the guest
  std::set<VcpuId> files;          // vcpus with a bound interrupt file
};

class Fuzzer {
 public:
  explicit Fuzzer(const FuzzOptions& options)
      : options_(options), rng_(options.seed), oracle_(options.memory_pages) {
    PlatformConfig cfg = PlatformConfig::defaults();
    cfg.memory_pages = options.memory_pages;
    cfg.max_tvms = options.max_tvms;
    platform_.emplace(cfg);
    report_.seed = options.seed;
    report_.ops_requested = options.ops;
  }

  FuzzReport run() {
    AbiStatus booted = platform_->boot();
    if (booted != AbiStatus::Ok) {
      violation("boot failed");
      return finish();
    }
    oracle_.apply_boot(platform_->config());
    (void)platform_->mtt().take_dirty();

    while (report_.ops_executed < options_.ops) {
      if (chance(options_.illegal_bias_pct)) {
        step_illegal();
      } else {
        step_legal();
      }
      if (report_.ops_executed >= options_.break_oracle_at && !corrupted_) {
        corrupted_ = true;
        oracle_.corrupt_for_test();
        after_op(std::nullopt);  // the very next check must diverge
      }
    }
    return finish();
  }

 private:
  // --- randomness ------------------------------------------------------
  uint64_t below(uint64_t bound) { return rng_() % bound; }
  bool chance(uint32_t pct) { return below(100) < pct; }

  // --- bookkeeping ------------------------------------------------------
  void violation(const std::string& msg) {
    if (report_.first_violation_op == UINT64_MAX) {
      report_.first_violation_op = report_.ops_executed;
    }
    ++report_.violation_count;
    if (report_.violations.size() < kMaxRecordedViolations) {
      std::ostringstream os;
      os << "op " << report_.ops_executed << ": " << msg;
      report_.violations.push_back(os.str());
    }
  }

  void mix(uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      digest_ ^= (v >> (8 * i)) & 0xFF;
      digest_ *= 1099511628211ull;
    }
  }

  CovhResult covh(uint64_t fn, std::initializer_list<uint64_t> args = {},
                  const TvmProgram* program = nullptr) {
    CovhCall call;
    call.fn = fn;
    size_t i = 0;
    for (uint64_t a : args) call.args[i++] = a;
    call.program = program;
    CovhResult out = platform_->covh(0, call);
    ++report_.ops_executed;
    mix(fn);
    for (uint64_t a : call.args) mix(a);
    mix(static_cast<uint64_t>(out.status()));
    if (out.status() == AbiStatus::Ok) oracle_.apply_covh(call, out.response);
    return out;
  }

  void after_op(std::optional<TvmId> touched) {
    std::vector<PageAddr> dirty = platform_->mtt().take_dirty();
    for (std::string& v :
         check_invariants(*platform_, oracle_, dirty, touched)) {
      violation(v);
    }
  }

  void expect_ok(const CovhResult& r, const char* what,
                 std::optional<TvmId> touched) {
    ++report_.legal_ops;
    if (r.status() != AbiStatus::Ok) {
      std::ostringstream os;
      os << "legal " << what << " rejected with " << to_string(r.status());
      violation(os.str());
    }
    after_op(touched);
  }

  void expect_err(const CovhResult& r, AbiStatus want, const char* what) {
    ++report_.illegal_ops;
    if (r.status() != want) {
      std::ostringstream os;
      os << "illegal " << what << " returned " << to_string(r.status())
         << ", wanted " << to_string(want);
      violation(os.str());
    }
    after_op(std::nullopt);
  }

  // --- page selection (queries the oracle, which mirrors the platform) ---
  std::optional<uint64_t> pick_page(OwnerOracle::State state,
                                    uint64_t run = 1) {
    std::vector<uint64_t> candidates;
    for (uint64_t p = 0; p + run <= options_.memory_pages; ++p) {
      bool all = true;
      for (uint64_t i = 0; i < run; ++i) {
        if (oracle_.entry(p + i).state != state) {
          all = false;
          break;
        }
      }
      if (all) candidates.push_back(p);
    }
    if (candidates.empty()) return std::nullopt;
    return candidates[below(candidates.size())];
  }

  std::optional<uint64_t> pick_owned_page() {
    std::vector<uint64_t> candidates;
    for (uint64_t p = 0; p < options_.memory_pages; ++p) {
      if (oracle_.entry(p).state != OwnerOracle::State::Host) {
        candidates.push_back(p);
      }
    }
    if (candidates.empty()) return std::nullopt;
    return candidates[below(candidates.size())];
  }

  ModelTvm* pick_tvm(bool want_runnable) {
    std::vector<ModelTvm*> candidates;
    for (auto& [id, m] : tvms_) {
      if (m.runnable == want_runnable) candidates.push_back(&m);
    }
    if (candidates.empty()) return nullptr;
    return candidates[below(candidates.size())];
  }

  ModelTvm* any_tvm() {
    if (tvms_.empty()) return nullptr;
    auto it = tvms_.begin();
    std::advance(it, below(tvms_.size()));
    return &it->second;
  }

  std::optional<uint64_t> unmapped_conf_gpa(const ModelTvm& m) {
    std::vector<uint64_t> candidates;
    uint64_t first = kConfRegionGpa >> kPageShift;
    for (uint64_t g = first; g < first + kConfRegionPages; ++g) {
      if (!m.mapped.contains(g)) candidates.push_back(g);
    }
    if (candidates.empty()) return std::nullopt;
    return candidates[below(candidates.size())];
  }

  TvmProgram random_program() {
    TvmProgram prog;
    uint64_t n = 1 + below(5);
    for (uint64_t i = 0; i < n; ++i) {
      switch (below(4)) {
        case 0:
          prog.push_back(Action::touch(
              AccessKind::Load,
              kConfRegionGpa + below(kConfRegionPages) * kPageSize +
                  below(512) * 8));
          break;
        case 1:
          prog.push_back(Action::touch(
              AccessKind::Store,
              kConfRegionGpa + below(kConfRegionPages) * kPageSize +
                  below(512) * 8,
              rng_()));
          break;
        case 2:
          prog.push_back(Action::wfi());
          break;
        case 3: {
          Action a = Action::covg(kCovgGetEvidence);
          for (auto& b : a.report_data) b = static_cast<uint8_t>(rng_());
          prog.push_back(a);
          break;
        }
      }
    }
    prog.push_back(Action::exit(below(16)));
    return prog;
  }

  void revoke_shared_in_models(uint64_t start, uint64_t count) {
    for (auto& [id, m] : tvms_) {
      std::vector<uint64_t> doomed;
      for (const auto& [gpa, spa] : m.shared_spas) {
        if (spa >= start && spa < start + count) doomed.push_back(gpa);
      }
      for (uint64_t gpa : doomed) {
        m.shared_spas.erase(gpa);
        m.mapped.erase(gpa);
      }
    }
  }

  // --- legal op generators ------------------------------------------------
  void step_legal() {
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (try_legal(below(16))) return;
    }
    expect_ok(covh(kCovhTsmInfo), "tsm_info", std::nullopt);
  }

  bool try_legal(uint64_t kind) {
    switch (kind) {
      case 0: {  // convert
        uint64_t run = 1 + below(3);
        auto page = pick_page(OwnerOracle::State::Host, run);
        if (!page.has_value()) return false;
        revoke_shared_in_models(*page, run);
        expect_ok(covh(kCovhConvertPages, {*page * kPageSize, run}), "convert",
                  std::nullopt);
        return true;
      }
      case 1: {  // reclaim
        uint64_t run = 1 + below(2);
        auto page = pick_page(OwnerOracle::State::Free, run);
        if (!page.has_value()) return false;
        expect_ok(covh(kCovhReclaimPages, {*page * kPageSize, run}), "reclaim",
                  std::nullopt);
        return true;
      }
      case 2: {  // create + standard regions
        if (tvms_.size() >= options_.max_tvms) return false;
        auto page = pick_page(OwnerOracle::State::Free);
        if (!page.has_value()) return false;
        auto created =
            covh(kCovhTvmCreate, {*page * kPageSize, 1, below(2)});
        expect_ok(created, "tvm_create", std::nullopt);
        if (created.status() != AbiStatus::Ok) return true;
        TvmId id = created.response.values[0];
        ModelTvm m;
        m.id = id;
        tvms_[id] = m;
        expect_ok(covh(kCovhAddMemoryRegion,
                       {id, 0, kConfRegionGpa, kConfRegionPages}),
                  "add_memory_region", id);
        expect_ok(covh(kCovhAddMemoryRegion,
                       {id, 1, kSharedRegionGpa, kSharedRegionPages}),
                  "add_memory_region", id);
        return true;
      }
      case 3: {  // donate table pages
        ModelTvm* m = any_tvm();
        auto page = pick_page(OwnerOracle::State::Free);
        if (m == nullptr || !page.has_value()) return false;
        expect_ok(covh(kCovhAddPageTablePages, {m->id, *page * kPageSize, 1}),
                  "add_page_table_pages", m->id);
        m->capacity += kMappingsPerTablePage;
        return true;
      }
      case 4: {  // measured page
        ModelTvm* m = pick_tvm(false);
        auto src = pick_page(OwnerOracle::State::Host);
        auto dest = pick_page(OwnerOracle::State::Free);
        if (m == nullptr || !src.has_value() || !dest.has_value()) return false;
        if (m->mapped.size() >= m->capacity) return false;
        auto gpa = unmapped_conf_gpa(*m);
        if (!gpa.has_value()) return false;
        auto page = platform_->memory().page(PageAddr{*src});
        for (size_t i = 0; i < 64; ++i) page[i] = static_cast<uint8_t>(rng_());
        expect_ok(covh(kCovhAddMeasuredPages,
                       {m->id, *src * kPageSize, *dest * kPageSize,
                        *gpa * kPageSize}),
                  "add_measured_pages", m->id);
        m->mapped.insert(*gpa);
        return true;
      }
      case 5: {  // create vcpu
        ModelTvm* m = pick_tvm(false);
        auto page = pick_page(OwnerOracle::State::Free);
        if (m == nullptr || !page.has_value()) return false;
        TvmProgram prog = random_program();
        expect_ok(covh(kCovhCreateVcpu,
                       {m->id, m->vcpus, *page * kPageSize, 1}, &prog),
                  "create_vcpu", m->id);
        ++m->vcpus;
        return true;
      }
      case 6: {  // finalize
        ModelTvm* m = pick_tvm(false);
        if (m == nullptr || m->vcpus == 0) return false;
        expect_ok(covh(kCovhFinalize, {m->id}), "finalize", m->id);
        m->runnable = true;
        return true;
      }
      case 7: {  // run (and maybe service a fault)
        ModelTvm* m = pick_tvm(true);
        if (m == nullptr || m->vcpus == 0) return false;
        VcpuId vcpu = below(m->vcpus);
        auto r = covh(kCovhRun, {m->id, vcpu});
        expect_ok(r, "tvm_run", m->id);
        if (r.status() == AbiStatus::Ok &&
            r.response.values[0] ==
                static_cast<uint64_t>(TvmExit::Reason::GuestPageFault) &&
            chance(70)) {
          uint64_t gpa_page = r.response.values[1] >> kPageShift;
          auto dest = pick_page(OwnerOracle::State::Free);
          if (dest.has_value() && !m->mapped.contains(gpa_page) &&
              m->mapped.size() < m->capacity) {
            expect_ok(covh(kCovhAddZeroPages,
                           {m->id, *dest * kPageSize, gpa_page * kPageSize}),
                      "add_zero_pages", m->id);
            m->mapped.insert(gpa_page);
          }
        }
        return true;
      }
      case 8: {  // demand-zero / reassign
        ModelTvm* m = pick_tvm(true);
        auto dest = pick_page(OwnerOracle::State::Free);
        if (m == nullptr || !dest.has_value()) return false;
        if (m->mapped.size() >= m->capacity) return false;
        auto gpa = unmapped_conf_gpa(*m);
        if (!gpa.has_value()) return false;
        uint64_t fn = chance(50) ? kCovhAddZeroPages : kCovhReassignPages;
        expect_ok(covh(fn, {m->id, *dest * kPageSize, *gpa * kPageSize}),
                  "add_zero_pages", m->id);
        m->mapped.insert(*gpa);
        return true;
      }
      case 9: {  // guest share offer
        ModelTvm* m = pick_tvm(true);
        if (m == nullptr || m->vcpus == 0) return false;
        uint64_t gpa_page =
            (kSharedRegionGpa >> kPageShift) + below(kSharedRegionPages);
        auto out = platform_->guest_action(
            0, m->id, below(m->vcpus),
            Action::covg(kCovgShare, gpa_page * kPageSize, 1));
        ++report_.ops_executed;
        ++report_.legal_ops;
        mix(kCovgShare);
        mix(gpa_page);
        if (out.status != AbiStatus::Ok) violation("legal covg_share rejected");
        m->offered.insert(gpa_page);
        after_op(m->id);
        return true;
      }
      case 10: {  // host maps an offered shared page
        ModelTvm* m = pick_tvm(true);
        auto src = pick_page(OwnerOracle::State::Host);
        if (m == nullptr || !src.has_value()) return false;
        if (m->mapped.size() >= m->capacity) return false;
        std::vector<uint64_t> offers;
        for (uint64_t g : m->offered) {
          if (!m->mapped.contains(g)) offers.push_back(g);
        }
        if (offers.empty()) return false;
        uint64_t gpa_page = offers[below(offers.size())];
        expect_ok(covh(kCovhAddSharedPages,
                       {m->id, *src * kPageSize, gpa_page * kPageSize}),
                  "add_shared_pages", m->id);
        m->mapped.insert(gpa_page);
        m->shared_spas[gpa_page] = *src;
        return true;
      }
      case 11: {  // guest unshare (revokes mapping)
        ModelTvm* m = pick_tvm(true);
        if (m == nullptr || m->vcpus == 0 || m->offered.empty()) return false;
        auto it = m->offered.begin();
        std::advance(it, below(m->offered.size()));
        uint64_t gpa_page = *it;
        auto out = platform_->guest_action(
            0, m->id, below(m->vcpus),
            Action::covg(kCovgUnshare, gpa_page * kPageSize, 1));
        ++report_.ops_executed;
        ++report_.legal_ops;
        mix(kCovgUnshare);
        mix(gpa_page);
        if (out.status != AbiStatus::Ok) {
          violation("legal covg_unshare rejected");
        }
        m->offered.erase(gpa_page);
        if (m->shared_spas.erase(gpa_page) > 0) m->mapped.erase(gpa_page);
        after_op(m->id);
        return true;
      }
      case 12: {  // destroy
        ModelTvm* m = any_tvm();
        if (m == nullptr) return false;
        TvmId id = m->id;
        expect_ok(covh(kCovhDestroy, {id}), "tvm_destroy", std::nullopt);
        tvms_.erase(id);
        return true;
      }
      case 13: {  // bind an interrupt file
        ModelTvm* m = any_tvm();
        auto page = pick_page(OwnerOracle::State::Free);
        if (m == nullptr || !page.has_value()) return false;
        std::optional<VcpuId> vcpu;
        for (VcpuId v = 0; v < m->vcpus; ++v) {
          if (!m->files.contains(v)) {
            vcpu = v;
            break;
          }
        }
        if (!vcpu.has_value()) return false;
        expect_ok(covh(kCoviBindInterruptFile, {m->id, *vcpu, *page * kPageSize}),
                  "covi_bind", m->id);
        m->files.insert(*vcpu);
        return true;
      }
      case 14: {  // inject
        ModelTvm* m = any_tvm();
        if (m == nullptr || m->files.empty()) return false;
        auto it = m->files.begin();
        std::advance(it, below(m->files.size()));
        AbiStatus s = platform_->inject_interrupt(
            m->id, *it, 1 + static_cast<uint32_t>(below(kMaxIrq)));
        ++report_.ops_executed;
        ++report_.legal_ops;
        mix(0x1111);
        mix(static_cast<uint64_t>(s));
        if (s != AbiStatus::Ok) violation("legal inject rejected");
        after_op(std::nullopt);
        return true;
      }
      case 15: {  // guest evidence request
        ModelTvm* m = pick_tvm(true);
        if (m == nullptr || m->vcpus == 0) return false;
        Action a = Action::covg(kCovgGetEvidence);
        for (auto& b : a.report_data) b = static_cast<uint8_t>(rng_());
        auto out = platform_->guest_action(0, m->id, below(m->vcpus), a);
        ++report_.ops_executed;
        ++report_.legal_ops;
        mix(kCovgGetEvidence);
        if (out.status != AbiStatus::Ok) {
          violation("legal covg_get_evidence rejected");
        }
        after_op(m->id);
        return true;
      }
      default:
        return false;
    }
  }

  // --- illegal op generators ----------------------------------------------
  void step_illegal() {
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (try_illegal(below(12))) return;
    }
    expect_err(covh(0xDEAD), AbiStatus::UnknownFunction, "unknown fn");
  }

  bool try_illegal(uint64_t kind) {
    switch (kind) {
      case 0: {  // host load of confidential memory must fault
        auto page = pick_owned_page();
        if (!page.has_value()) return false;
        AccessResult r = platform_->host_access(
            0, *page * kPageSize + below(512) * 8, AccessKind::Load);
        ++report_.ops_executed;
        ++report_.illegal_ops;
        ++report_.denials_checked;
        mix(0xAD0);
        mix(*page);
        if (!r.exception.has_value() ||
            r.exception->kind != ExceptionKind::AccessFault) {
          violation("host load of confidential memory was not denied");
        }
        after_op(std::nullopt);
        return true;
      }
      case 1: {  // host store of confidential memory must fault
        auto page = pick_owned_page();
        if (!page.has_value()) return false;
        AccessResult r = platform_->host_access(
            0, *page * kPageSize + below(512) * 8, AccessKind::Store, rng_());
        ++report_.ops_executed;
        ++report_.illegal_ops;
        ++report_.denials_checked;
        mix(0xAD1);
        mix(*page);
        if (!r.exception.has_value() ||
            r.exception->kind != ExceptionKind::AccessFault) {
          violation("host store to confidential memory was not denied");
        }
        after_op(std::nullopt);
        return true;
      }
      case 2: {  // converting a confidential page
        auto page = pick_owned_page();
        if (!page.has_value()) return false;
        expect_err(covh(kCovhConvertPages, {*page * kPageSize, 1}),
                   AbiStatus::AlreadyConfidential, "convert");
        return true;
      }
      case 3: {  // reclaiming an assigned page
        std::vector<uint64_t> assigned;
        for (uint64_t p = 0; p < options_.memory_pages; ++p) {
          if (oracle_.entry(p).state == OwnerOracle::State::Owned) {
            assigned.push_back(p);
          }
        }
        if (assigned.empty()) return false;
        expect_err(
            covh(kCovhReclaimPages, {assigned[below(assigned.size())] * kPageSize, 1}),
            AbiStatus::PageInUse, "reclaim");
        return true;
      }
      case 4: {  // create on a non-free page
        auto page = pick_page(OwnerOracle::State::Host);
        if (!page.has_value() || tvms_.size() >= options_.max_tvms) {
          return false;
        }
        expect_err(covh(kCovhTvmCreate, {*page * kPageSize, 1, 0}),
                   AbiStatus::PageNotFree, "tvm_create");
        return true;
      }
      case 5: {  // measured add after finalize
        ModelTvm* m = pick_tvm(true);
        auto src = pick_page(OwnerOracle::State::Host);
        auto dest = pick_page(OwnerOracle::State::Free);
        if (m == nullptr || !src.has_value() || !dest.has_value()) return false;
        expect_err(covh(kCovhAddMeasuredPages,
                        {m->id, *src * kPageSize, *dest * kPageSize,
                         kConfRegionGpa}),
                   AbiStatus::WrongPhase, "add_measured_pages");
        return true;
      }
      case 6: {  // run before finalize, or an unknown vcpu
        ModelTvm* m = pick_tvm(false);
        if (m != nullptr) {
          expect_err(covh(kCovhRun, {m->id, 0}), AbiStatus::WrongPhase,
                     "tvm_run");
          return true;
        }
        m = pick_tvm(true);
        if (m == nullptr) return false;
        expect_err(covh(kCovhRun, {m->id, m->vcpus + 17}),
                   AbiStatus::UnknownVcpu, "tvm_run");
        return true;
      }
      case 7: {  // unknown tvm id
        expect_err(covh(kCovhDestroy, {next_bogus_id()}), AbiStatus::UnknownTvm,
                   "tvm_destroy");
        return true;
      }
      case 8: {  // unknown function id
        expect_err(covh(0x7000 + below(64)), AbiStatus::UnknownFunction,
                   "covh");
        return true;
      }
      case 9: {  // zero page at an already mapped gpa
        ModelTvm* m = pick_tvm(true);
        auto dest = pick_page(OwnerOracle::State::Free);
        if (m == nullptr || !dest.has_value() || m->mapped.empty()) {
          return false;
        }
        std::vector<uint64_t> conf_mapped;
        uint64_t first = kConfRegionGpa >> kPageShift;
        for (uint64_t g : m->mapped) {
          if (g >= first && g < first + kConfRegionPages) conf_mapped.push_back(g);
        }
        if (conf_mapped.empty()) return false;
        expect_err(covh(kCovhAddZeroPages,
                        {m->id, *dest * kPageSize,
                         conf_mapped[below(conf_mapped.size())] * kPageSize}),
                   AbiStatus::GpaAlreadyMapped, "add_zero_pages");
        return true;
      }
      case 10: {  // shared mapping without a guest offer
        ModelTvm* m = pick_tvm(true);
        auto src = pick_page(OwnerOracle::State::Host);
        if (m == nullptr || !src.has_value()) return false;
        std::optional<uint64_t> gpa_page;
        uint64_t first = kSharedRegionGpa >> kPageShift;
        for (uint64_t g = first; g < first + kSharedRegionPages; ++g) {
          if (!m->offered.contains(g) && !m->mapped.contains(g)) {
            gpa_page = g;
            break;
          }
        }
        if (!gpa_page.has_value()) return false;
        expect_err(covh(kCovhAddSharedPages,
                        {m->id, *src * kPageSize, *gpa_page * kPageSize}),
                   AbiStatus::GpaNotShared, "add_shared_pages");
        return true;
      }
      case 11: {  // interrupt file access from the host
        ModelTvm* with_file = nullptr;
        for (auto& [id, m] : tvms_) {
          if (!m.files.empty()) with_file = &m;
        }
        if (with_file == nullptr) return false;
        IntFileResult r = platform_->intfile_access(
            0, with_file->id, *with_file->files.begin(), AccessKind::Load);
        ++report_.ops_executed;
        ++report_.illegal_ops;
        ++report_.denials_checked;
        mix(0xAD2);
        if (!r.exception.has_value() ||
            r.exception->kind != ExceptionKind::IllegalInstruction) {
          violation("host interrupt-file access did not raise illegal instruction");
        }
        after_op(std::nullopt);
        return true;
      }
      default:
        return false;
    }
  }

  uint64_t next_bogus_id() { return 0x4000'0000 + below(1000); }

  FuzzReport finish() {
    std::ostringstream os;
    os << std::hex << digest_;
    report_.sequence_digest = os.str();
    return report_;
  }

  FuzzOptions options_;
  std::mt19937_64 rng_;
  OwnerOracle oracle_;
  std::optional<Platform> platform_;
  std::map<TvmId, ModelTvm> tvms_;
  FuzzReport report_;
  uint64_t digest_ = 1469598103934665603ull;
  bool corrupted_ = false;
};

}  // namespace

std::string FuzzReport::summary() const {
  std::ostringstream os;
  os << "fuzz seed=" << seed << " ops=" << ops_executed << "/" << ops_requested
     << " legal=" << legal_ops << " illegal=" << illegal_ops
     << " denials=" << denials_checked << " violations=" << violation_count
     << " digest=" << sequence_digest;
  return os.str();
}

FuzzReport run_fuzz(const FuzzOptions& options) {
  Fuzzer fuzzer(options);
  return fuzzer.run();
}

}  // namespace cove::scenario
