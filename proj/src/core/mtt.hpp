// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <optional>
#include <vector>

#include "core/phys_mem.hpp"
#include "core/types.hpp"

namespace cove {

/// Per-page ownership state. The architectural C bit is
/// (state != NonConfidential); the free/assigned split tracks the
/// convert -> assign -> release -> reclaim lifecycle.
enum class PageState : uint8_t {
  NonConfidential,
  ConfidentialFree,
  ConfidentialAssigned,
};

const char* to_string(PageState s);

struct MttEntry {
  PageState state = PageState::NonConfidential;
  std::optional<PageOwner> owner;  // present iff state == ConfidentialAssigned
  std::optional<PageUse> use;      // present iff owner is present
};

/// Who is making a physical access. The confidential qualifier is redundant
/// with the domain (Host => C=0, Tsm/Tvm => C=1) but carried explicitly
/// because the hart owns it and the check is specified in terms of it.
struct AccessContext {
  enum class Domain : uint8_t { Host, Tsm, Tvm };

  uint8_t conf_qualifier = 0;
  Domain domain = Domain::Host;
  TvmId tvm = 0;  // meaningful only when domain == Tvm
  AccessKind kind = AccessKind::Load;

  static AccessContext host(AccessKind k) {
    return {0, Domain::Host, 0, k};
  }
  static AccessContext tsm(AccessKind k) {
    return {1, Domain::Tsm, 0, k};
  }
  static AccessContext of_tvm(TvmId id, AccessKind k) {
    return {1, Domain::Tvm, id, k};
  }
};

struct AccessDecision {
  bool allow = false;
  std::optional<FaultKind> fault;  // present iff !allow

  static AccessDecision allowed() { return {true, std::nullopt}; }
  static AccessDecision denied(FaultKind f) { return {false, f}; }
};

enum class MttStatus : uint8_t {
  Ok,
  OutOfBounds,
  AlreadyConfidential,
  PageInUse,
  NotConfidential,
  NotFree,
  NotAssigned,
};

/// The Memory Tracking Table: a flat array of per-page entries plus the
/// access checker applied to every physical access. Also owns the scrub
/// discipline: any page leaving ConfidentialAssigned or ConfidentialFree is
/// zeroed before it becomes visible to a less trusted domain.
///
/// Range operations validate every page first and commit only if the whole
/// range is acceptable.
class MemoryTracker {
 public:
  explicit MemoryTracker(PhysicalMemory& mem)
      : mem_(mem), entries_(mem.page_count()) {}

  uint64_t page_count() const { return entries_.size(); }
  bool contains(PageAddr p) const { return p.num < entries_.size(); }
  const MttEntry& entry(PageAddr p) const { return entries_[p.num]; }

  /// Decide whether `ctx` may access `page`. Pure function of the entry and
  /// the context; `page` must be in bounds. Denials:
  ///   (a) C==0 on any confidential page,
  ///   (b) a TVM touching another owner's assigned page,
  ///   (c) a TVM fetching or page-walking through non-confidential memory,
  ///   (d) the TSM fetching from non-confidential memory.
  /// Everything else is allowed; in particular C==1 loads/stores to
  /// non-confidential pages support globally shared IO memory, and the
  /// caller is responsible for granting them only through shared mappings.
  AccessDecision check(PageAddr page, const AccessContext& ctx) const;

  /// NonConfidential -> ConfidentialFree for `count` pages, zeroing them.
  MttStatus convert_range(PageAddr start, uint64_t count);

  /// ConfidentialFree -> NonConfidential for `count` pages, zeroing them.
  MttStatus reclaim_range(PageAddr start, uint64_t count);

  /// ConfidentialFree -> ConfidentialAssigned(owner, use).
  MttStatus assign_page(PageAddr page, PageOwner owner, PageUse use);

  /// ConfidentialAssigned -> ConfidentialFree, zeroing the page.
  MttStatus release_page(PageAddr page);

  /// Pages whose entry changed since the last call (for trace deltas and
  /// incremental invariant checks). Cleared on read.
  std::vector<PageAddr> take_dirty();

  /// Total check() invocations; lets tests pin how many enforcement checks
  /// an access path performs (one per physical access, one per walk).
  uint64_t check_count() const { return check_count_; }

 private:
  void touch(PageAddr p) { dirty_.push_back(p); }

  PhysicalMemory& mem_;
  std::vector<MttEntry> entries_;
  std::vector<PageAddr> dirty_;
  mutable uint64_t check_count_ = 0;
};

}  // namespace cove
