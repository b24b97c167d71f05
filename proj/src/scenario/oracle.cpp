// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "scenario/oracle.hpp"

#include <sstream>

namespace cove::scenario {

namespace {

uint64_t blob_pages(const std::vector<uint8_t>& blob) {
  return std::max<uint64_t>(1, (blob.size() + kPageSize - 1) / kPageSize);
}

}  // namespace

void OwnerOracle::apply_boot(const PlatformConfig& config) {
  uint64_t tcb = blob_pages(config.tsm_driver_blob) + blob_pages(config.tsm_blob);
  for (uint64_t p = config.memory_pages - tcb; p < config.memory_pages; ++p) {
    entries_[p] = {State::Owned, true, 0};
  }
}

void OwnerOracle::own(uint64_t page, TvmId tvm) {
  entries_[page] = {State::Owned, false, tvm};
  tvm_pages_[tvm].insert(page);
}

void OwnerOracle::apply_covh(const CovhCall& call, const TsmResponse& response) {
  const auto& a = call.args;
  auto page_of = [](uint64_t addr) { return addr >> kPageShift; };

  switch (call.fn) {
    case kCovhConvertPages:
      for (uint64_t i = 0; i < a[1]; ++i) {
        entries_[page_of(a[0]) + i] = {State::Free, false, 0};
      }
      break;
    case kCovhReclaimPages:
      for (uint64_t i = 0; i < a[1]; ++i) {
        entries_[page_of(a[0]) + i] = {State::Host, false, 0};
      }
      break;
    case kCovhTvmCreate: {
      TvmId id = response.values[0];
      for (uint64_t i = 0; i < a[1]; ++i) own(page_of(a[0]) + i, id);
      break;
    }
    case kCovhAddPageTablePages:
      for (uint64_t i = 0; i < a[2]; ++i) own(page_of(a[1]) + i, a[0]);
      break;
    case kCovhAddMeasuredPages:
      own(page_of(a[2]), a[0]);  // dest; src stays non-confidential
      break;
    case kCovhCreateVcpu:
      for (uint64_t i = 0; i < a[3]; ++i) own(page_of(a[2]) + i, a[0]);
      break;
    case kCovhAddZeroPages:
    case kCovhReassignPages:
      own(page_of(a[1]), a[0]);
      break;
    case kCoviBindInterruptFile:
      own(page_of(a[2]), a[0]);
      break;
    case kCovhDestroy: {
      auto it = tvm_pages_.find(a[0]);
      if (it != tvm_pages_.end()) {
        for (uint64_t page : it->second) {
          entries_[page] = {State::Free, false, 0};
        }
        tvm_pages_.erase(it);
      }
      break;
    }
    default:
      break;  // info, regions, run, shared mappings: no ownership change
  }
}

void OwnerOracle::corrupt_for_test() {
  for (auto& e : entries_) {
    if (e.state == State::Owned && !e.tsm_owned) {
      e.state = State::Free;
      return;
    }
  }
  if (!entries_.empty()) entries_[0].state = State::Free;
}

std::string OwnerOracle::divergence(const MemoryTracker& mtt) const {
  for (uint64_t p = 0; p < entries_.size(); ++p) {
    const MttEntry& m = mtt.entry(PageAddr{p});
    const Entry& o = entries_[p];
    bool match = false;
    switch (o.state) {
      case State::Host:
        match = m.state == PageState::NonConfidential;
        break;
      case State::Free:
        match = m.state == PageState::ConfidentialFree;
        break;
      case State::Owned:
        match = m.state == PageState::ConfidentialAssigned &&
                m.owner.has_value() && m.owner->is_tsm == o.tsm_owned &&
                (o.tsm_owned || m.owner->tvm == o.tvm);
        break;
    }
    if (!match) {
      std::ostringstream os;
      os << "oracle divergence at page " << p << ": mtt=" << to_string(m.state);
      if (m.owner.has_value()) {
        os << "/" << (m.owner->is_tsm ? "tsm" : "tvm") << m.owner->tvm;
      }
      os << " oracle="
         << (o.state == State::Host   ? "host"
             : o.state == State::Free ? "free"
                                      : "owned");
      return os.str();
    }
  }
  return {};
}

const std::set<uint64_t>& OwnerOracle::pages_of(TvmId tvm) const {
  static const std::set<uint64_t> empty;
  auto it = tvm_pages_.find(tvm);
  return it == tvm_pages_.end() ? empty : it->second;
}

std::vector<std::string> check_invariants(const Platform& platform,
                                          const OwnerOracle& oracle,
                                          const std::vector<PageAddr>& dirty,
                                          std::optional<TvmId> touched_tvm) {
  std::vector<std::string> out;
  auto fail = [&out](std::string msg) { out.push_back(std::move(msg)); };

  std::string diverged = oracle.divergence(platform.mtt());
  if (!diverged.empty()) fail(diverged);

  // Scrub: pages that just became Free or NonConfidential hold zeros.
  for (PageAddr p : dirty) {
    const MttEntry& e = platform.mtt().entry(p);
    if (e.state != PageState::ConfidentialAssigned &&
        !platform.memory().page_is_zero(p)) {
      std::ostringstream os;
      os << "scrub violation: page " << p.num << " is " << to_string(e.state)
         << " but holds nonzero bytes";
      fail(os.str());
    }
  }

  // Every owning TVM must be live: destroy leaves no entry behind.
  for (uint64_t p = 0; p < platform.mtt().page_count(); ++p) {
    const MttEntry& e = platform.mtt().entry(PageAddr{p});
    if (!e.owner.has_value() || e.owner->is_tsm) continue;
    const Tvm* owner = platform.tsm().find_tvm(e.owner->tvm);
    if (owner == nullptr) {
      std::ostringstream os;
      os << "page " << p << " owned by destroyed tvm " << e.owner->tvm;
      fail(os.str());
    }
  }

  // G-stage / ownership coherence, including global spa exclusivity.
  std::set<uint64_t> mapped_confidential_spas;
  for (const auto& [id, tvm] : platform.tsm().tvms()) {
    for (const auto& [gpa_page, mapping] : tvm.gstage) {
      const MttEntry& e = platform.mtt().entry(mapping.spa);
      const MemRegion* region = tvm.find_region(gpa_page);
      if (mapping.kind == GStageMapping::Kind::Shared) {
        if (e.state != PageState::NonConfidential) {
          std::ostringstream os;
          os << "shared mapping of tvm " << id << " at gpa page " << gpa_page
             << " points at " << to_string(e.state) << " page " << mapping.spa.num;
          fail(os.str());
        }
        if (region == nullptr ||
            region->kind != MemRegion::Kind::NonConfidentialShared) {
          std::ostringstream os;
          os << "shared mapping outside a shared region (tvm " << id << ")";
          fail(os.str());
        }
      } else {
        bool owned = e.state == PageState::ConfidentialAssigned &&
                     e.owner == PageOwner::of_tvm(id) &&
                     e.use == PageUse::TvmData;
        if (!owned) {
          std::ostringstream os;
          os << "mapping of tvm " << id << " at gpa page " << gpa_page
             << " not backed by its own data page";
          fail(os.str());
        }
        if (region == nullptr ||
            region->kind != MemRegion::Kind::Confidential) {
          std::ostringstream os;
          os << "confidential mapping outside a confidential region (tvm "
             << id << ")";
          fail(os.str());
        }
        if (!mapped_confidential_spas.insert(mapping.spa.num).second) {
          std::ostringstream os;
          os << "spa " << mapping.spa.num << " mapped confidentially twice";
          fail(os.str());
        }
      }
    }

    if (!touched_tvm.has_value() || *touched_tvm == id) {
      crypto::Digest replayed =
          MeasurementRegister::replay(tvm.measurement.log());
      if (replayed != tvm.measurement.digest()) {
        std::ostringstream os;
        os << "measurement log of tvm " << id << " does not replay its digest";
        fail(os.str());
      }
    }
  }

  for (uint32_t h = 0; h < platform.hart_count(); ++h) {
    if (!is_legal_hart_state(platform.hart(h))) {
      std::ostringstream os;
      os << "hart " << h << " is in an illegal state";
      fail(os.str());
    }
  }
  return out;
}

}  // namespace cove::scenario
