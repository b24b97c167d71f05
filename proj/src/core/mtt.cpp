// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/mtt.hpp"

#include <cassert>

namespace cove {

const char* to_string(PageState s) {
  switch (s) {
    case PageState::NonConfidential: return "non_confidential";
    case PageState::ConfidentialFree: return "confidential_free";
    case PageState::ConfidentialAssigned: return "confidential_assigned";
  }
  return "?";
}

AccessDecision MemoryTracker::check(PageAddr page,
                                    const AccessContext& ctx) const {
  assert(contains(page));
  ++check_count_;
  const MttEntry& e = entries_[page.num];

  if (ctx.conf_qualifier == 0 && e.state != PageState::NonConfidential) {
    return AccessDecision::denied(FaultKind::AccessFault);
  }
  if (ctx.domain == AccessContext::Domain::Tvm &&
      e.state == PageState::ConfidentialAssigned &&
      *e.owner != PageOwner::of_tvm(ctx.tvm)) {
    return AccessDecision::denied(FaultKind::AccessFault);
  }
  if (ctx.domain == AccessContext::Domain::Tvm &&
      e.state == PageState::NonConfidential &&
      (ctx.kind == AccessKind::Fetch || ctx.kind == AccessKind::PageWalk)) {
    return AccessDecision::denied(FaultKind::AccessFault);
  }
  if (ctx.domain == AccessContext::Domain::Tsm &&
      e.state == PageState::NonConfidential && ctx.kind == AccessKind::Fetch) {
    return AccessDecision::denied(FaultKind::AccessFault);
  }
  return AccessDecision::allowed();
}

MttStatus MemoryTracker::convert_range(PageAddr start, uint64_t count) {
  if (start.num + count > entries_.size() || start.num + count < start.num) {
    return MttStatus::OutOfBounds;
  }
  for (uint64_t i = 0; i < count; ++i) {
    if (entries_[start.num + i].state != PageState::NonConfidential) {
      return MttStatus::AlreadyConfidential;
    }
  }
  for (uint64_t i = 0; i < count; ++i) {
    PageAddr p{start.num + i};
    entries_[p.num] = {PageState::ConfidentialFree, std::nullopt, std::nullopt};
    mem_.zero_page(p);
    touch(p);
  }
  return MttStatus::Ok;
}

MttStatus MemoryTracker::reclaim_range(PageAddr start, uint64_t count) {
  if (start.num + count > entries_.size() || start.num + count < start.num) {
    return MttStatus::OutOfBounds;
  }
  for (uint64_t i = 0; i < count; ++i) {
    switch (entries_[start.num + i].state) {
      case PageState::ConfidentialAssigned:
        return MttStatus::PageInUse;
      case PageState::NonConfidential:
        return MttStatus::NotConfidential;
      case PageState::ConfidentialFree:
        break;
    }
  }
  for (uint64_t i = 0; i < count; ++i) {
    PageAddr p{start.num + i};
    entries_[p.num] = {PageState::NonConfidential, std::nullopt, std::nullopt};
    mem_.zero_page(p);
    touch(p);
  }
  return MttStatus::Ok;
}

MttStatus MemoryTracker::assign_page(PageAddr page, PageOwner owner,
                                     PageUse use) {
  if (!contains(page)) return MttStatus::OutOfBounds;
  if (entries_[page.num].state != PageState::ConfidentialFree) {
    return MttStatus::NotFree;
  }
  entries_[page.num] = {PageState::ConfidentialAssigned, owner, use};
  touch(page);
  return MttStatus::Ok;
}

MttStatus MemoryTracker::release_page(PageAddr page) {
  if (!contains(page)) return MttStatus::OutOfBounds;
  if (entries_[page.num].state != PageState::ConfidentialAssigned) {
    return MttStatus::NotAssigned;
  }
  entries_[page.num] = {PageState::ConfidentialFree, std::nullopt, std::nullopt};
  mem_.zero_page(page);
  touch(page);
  return MttStatus::Ok;
}

std::vector<PageAddr> MemoryTracker::take_dirty() {
  std::vector<PageAddr> out;
  out.swap(dirty_);
  return out;
}

}  // namespace cove
