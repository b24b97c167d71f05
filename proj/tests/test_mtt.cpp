// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/mtt.hpp"
#include "support/ref_oracles.hpp"
#include "support/test_rng.hpp"

using namespace cove;
using namespace cove::testing;

namespace {

struct Fixture {
  PhysicalMemory mem{64};
  MemoryTracker mtt{mem};
};

const TvmId kTvm1 = 1;
const TvmId kTvm2 = 2;

}  // namespace

TEST_CASE("check: default world allows host") {
  Fixture f;
  auto d = f.mtt.check(PageAddr{3}, AccessContext::host(AccessKind::Load));
  CHECK(d.allow);
  CHECK_FALSE(d.fault.has_value());
}

TEST_CASE("check: host denied on confidential pages") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{4}, 1) == MttStatus::Ok);
  REQUIRE(f.mtt.assign_page(PageAddr{4}, PageOwner::of_tvm(kTvm1),
                            PageUse::TvmData) == MttStatus::Ok);

  for (AccessKind k : {AccessKind::Load, AccessKind::Store, AccessKind::Fetch,
                       AccessKind::PageWalk}) {
    auto d = f.mtt.check(PageAddr{4}, AccessContext::host(k));
    CHECK_FALSE(d.allow);
    CHECK(d.fault == FaultKind::AccessFault);
  }
}

TEST_CASE("check: tvm denied on another tvm's page") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{5}, 1) == MttStatus::Ok);
  REQUIRE(f.mtt.assign_page(PageAddr{5}, PageOwner::of_tvm(kTvm2),
                            PageUse::TvmData) == MttStatus::Ok);
  auto d = f.mtt.check(PageAddr{5},
                       AccessContext::of_tvm(kTvm1, AccessKind::Load));
  CHECK_FALSE(d.allow);
  CHECK(d.fault == FaultKind::AccessFault);

  // The owner itself is allowed.
  CHECK(f.mtt.check(PageAddr{5}, AccessContext::of_tvm(kTvm2, AccessKind::Load))
            .allow);
}

TEST_CASE("check: tvm fetch and page walk require confidential memory") {
  Fixture f;
  auto fetch = f.mtt.check(PageAddr{6},
                           AccessContext::of_tvm(kTvm1, AccessKind::Fetch));
  CHECK_FALSE(fetch.allow);
  CHECK(fetch.fault == FaultKind::AccessFault);
  CHECK_FALSE(f.mtt.check(PageAddr{6},
                          AccessContext::of_tvm(kTvm1, AccessKind::PageWalk))
                  .allow);

  // Data access to shared non-confidential memory stays possible.
  CHECK(f.mtt.check(PageAddr{6}, AccessContext::of_tvm(kTvm1, AccessKind::Load))
            .allow);
  CHECK(f.mtt.check(PageAddr{6},
                    AccessContext::of_tvm(kTvm1, AccessKind::Store))
            .allow);
}

TEST_CASE("check: tsm may read but not fetch non-confidential pages") {
  Fixture f;
  CHECK(f.mtt.check(PageAddr{7}, AccessContext::tsm(AccessKind::Load)).allow);
  CHECK_FALSE(
      f.mtt.check(PageAddr{7}, AccessContext::tsm(AccessKind::Fetch)).allow);
}

TEST_CASE("check matches the independent rule table everywhere") {
  Fixture f;
  // One page per interesting state.
  REQUIRE(f.mtt.convert_range(PageAddr{1}, 3) == MttStatus::Ok);
  REQUIRE(f.mtt.assign_page(PageAddr{2}, PageOwner::of_tvm(kTvm1),
                            PageUse::TvmData) == MttStatus::Ok);
  REQUIRE(f.mtt.assign_page(PageAddr{3}, PageOwner::tsm(),
                            PageUse::TsmInternal) == MttStatus::Ok);

  std::vector<AccessContext> contexts;
  for (AccessKind k : {AccessKind::Load, AccessKind::Store, AccessKind::Fetch,
                       AccessKind::PageWalk}) {
    contexts.push_back(AccessContext::host(k));
    contexts.push_back(AccessContext::tsm(k));
    contexts.push_back(AccessContext::of_tvm(kTvm1, k));
    contexts.push_back(AccessContext::of_tvm(kTvm2, k));
  }
  for (uint64_t p = 0; p < 5; ++p) {
    const MttEntry& e = f.mtt.entry(PageAddr{p});
    for (const AccessContext& ctx : contexts) {
      CAPTURE(p);
      CAPTURE(static_cast<int>(ctx.domain));
      CAPTURE(to_string(ctx.kind));
      CHECK(f.mtt.check(PageAddr{p}, ctx).allow ==
            oracle_allows(e.state, e.owner, ctx));
    }
  }
}

TEST_CASE("convert: whole range becomes free and zeroed") {
  Fixture f;
  f.mem.page(PageAddr{10})[100] = 0xAB;
  REQUIRE(f.mtt.convert_range(PageAddr{8}, 4) == MttStatus::Ok);
  for (uint64_t p = 8; p < 12; ++p) {
    CHECK(f.mtt.entry(PageAddr{p}).state == PageState::ConfidentialFree);
    CHECK(f.mem.page_is_zero(PageAddr{p}));
  }
}

TEST_CASE("convert: atomic rejection when any page is already confidential") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{9}, 1) == MttStatus::Ok);
  REQUIRE(f.mtt.assign_page(PageAddr{9}, PageOwner::of_tvm(kTvm1),
                            PageUse::TvmData) == MttStatus::Ok);

  CHECK(f.mtt.convert_range(PageAddr{8}, 4) == MttStatus::AlreadyConfidential);
  CHECK(f.mtt.entry(PageAddr{8}).state == PageState::NonConfidential);
  CHECK(f.mtt.entry(PageAddr{10}).state == PageState::NonConfidential);
  CHECK(f.mtt.entry(PageAddr{11}).state == PageState::NonConfidential);
}

TEST_CASE("convert: out of bounds") {
  Fixture f;
  CHECK(f.mtt.convert_range(PageAddr{0}, 65) == MttStatus::OutOfBounds);
  CHECK(f.mtt.convert_range(PageAddr{63}, 2) == MttStatus::OutOfBounds);
  // Overflow-shaped counts must not wrap.
  CHECK(f.mtt.convert_range(PageAddr{1}, ~uint64_t{0}) ==
        MttStatus::OutOfBounds);
}

TEST_CASE("reclaim: released pages read back as zeros") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{20}, 1) == MttStatus::Ok);
  REQUIRE(f.mtt.assign_page(PageAddr{20}, PageOwner::of_tvm(kTvm1),
                            PageUse::TvmData) == MttStatus::Ok);
  // Sentinel written while TVM-owned.
  f.mem.page(PageAddr{20})[77] = 0x5A;

  REQUIRE(f.mtt.release_page(PageAddr{20}) == MttStatus::Ok);
  REQUIRE(f.mtt.reclaim_range(PageAddr{20}, 1) == MttStatus::Ok);
  CHECK(f.mtt.entry(PageAddr{20}).state == PageState::NonConfidential);
  CHECK(f.mem.page_is_zero(PageAddr{20}));
}

TEST_CASE("reclaim: assigned page is in use; non-confidential rejected") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{21}, 1) == MttStatus::Ok);
  REQUIRE(f.mtt.assign_page(PageAddr{21}, PageOwner::of_tvm(kTvm1),
                            PageUse::TvmData) == MttStatus::Ok);
  CHECK(f.mtt.reclaim_range(PageAddr{21}, 1) == MttStatus::PageInUse);
  CHECK(f.mtt.reclaim_range(PageAddr{22}, 1) == MttStatus::NotConfidential);
}

TEST_CASE("convert then reclaim is the identity on the table") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{30}, 8) == MttStatus::Ok);
  REQUIRE(f.mtt.reclaim_range(PageAddr{30}, 8) == MttStatus::Ok);
  for (uint64_t p = 0; p < 64; ++p) {
    CHECK(f.mtt.entry(PageAddr{p}).state == PageState::NonConfidential);
    CHECK_FALSE(f.mtt.entry(PageAddr{p}).owner.has_value());
  }
}

TEST_CASE("assign: exclusive ownership") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{40}, 1) == MttStatus::Ok);
  CHECK(f.mtt.assign_page(PageAddr{40}, PageOwner::of_tvm(kTvm1),
                          PageUse::TvmData) == MttStatus::Ok);
  CHECK(f.mtt.assign_page(PageAddr{40}, PageOwner::of_tvm(kTvm2),
                          PageUse::TvmData) == MttStatus::NotFree);
  CHECK(f.mtt.entry(PageAddr{40}).owner == PageOwner::of_tvm(kTvm1));

  // Assignment of a non-confidential page requires conversion first.
  CHECK(f.mtt.assign_page(PageAddr{41}, PageOwner::of_tvm(kTvm1),
                          PageUse::TvmData) == MttStatus::NotFree);
}

TEST_CASE("release: scrubbed and reassignable without a reclaim cycle") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{42}, 1) == MttStatus::Ok);
  REQUIRE(f.mtt.assign_page(PageAddr{42}, PageOwner::of_tvm(kTvm1),
                            PageUse::TvmData) == MttStatus::Ok);
  f.mem.page(PageAddr{42})[0] = 0xEE;

  REQUIRE(f.mtt.release_page(PageAddr{42}) == MttStatus::Ok);
  CHECK(f.mem.page_is_zero(PageAddr{42}));
  CHECK(f.mtt.assign_page(PageAddr{42}, PageOwner::of_tvm(kTvm2),
                          PageUse::TvmData) == MttStatus::Ok);

  CHECK(f.mtt.release_page(PageAddr{43}) == MttStatus::NotAssigned);
}

TEST_CASE("property: random op sequences match the owner-map oracle") {
  Fixture f;
  SimpleOwnerMap oracle(64);
  TestRng rng(0xC0FE);

  for (int step = 0; step < 5000; ++step) {
    uint64_t page = rng.below(64);
    uint64_t count = 1 + rng.below(4);
    PageOwner owner =
        rng.chance(50) ? PageOwner::of_tvm(rng.below(3)) : PageOwner::tsm();
    switch (rng.below(4)) {
      case 0:
        if (f.mtt.convert_range(PageAddr{page}, count) == MttStatus::Ok) {
          oracle.convert(page, count);
        }
        break;
      case 1:
        if (f.mtt.reclaim_range(PageAddr{page}, count) == MttStatus::Ok) {
          oracle.reclaim(page, count);
        }
        break;
      case 2:
        if (f.mtt.assign_page(PageAddr{page}, owner, PageUse::TvmData) ==
            MttStatus::Ok) {
          oracle.assign(page, owner);
        }
        break;
      case 3:
        if (f.mtt.release_page(PageAddr{page}) == MttStatus::Ok) {
          oracle.release(page);
        }
        break;
    }
    REQUIRE(oracle.matches(f.mtt));
  }
}

TEST_CASE("property: no host access to any confidential page, exhaustively") {
  Fixture f;
  REQUIRE(f.mtt.convert_range(PageAddr{0}, 64) == MttStatus::Ok);
  for (uint64_t p = 0; p < 64; p += 2) {
    REQUIRE(f.mtt.assign_page(PageAddr{p}, PageOwner::of_tvm(p % 4),
                              PageUse::TvmData) == MttStatus::Ok);
  }
  for (uint64_t p = 0; p < 64; ++p) {
    for (AccessKind k : {AccessKind::Load, AccessKind::Store,
                         AccessKind::Fetch, AccessKind::PageWalk}) {
      CHECK_FALSE(f.mtt.check(PageAddr{p}, AccessContext::host(k)).allow);
    }
  }
}

TEST_CASE("invariant: owner present iff assigned, use iff owner") {
  Fixture f;
  TestRng rng(7);
  for (int step = 0; step < 2000; ++step) {
    uint64_t page = rng.below(64);
    switch (rng.below(4)) {
      case 0: f.mtt.convert_range(PageAddr{page}, 1); break;
      case 1: f.mtt.reclaim_range(PageAddr{page}, 1); break;
      case 2:
        f.mtt.assign_page(PageAddr{page}, PageOwner::of_tvm(0),
                          PageUse::VcpuState);
        break;
      case 3: f.mtt.release_page(PageAddr{page}); break;
    }
    for (uint64_t p = 0; p < 64; ++p) {
      const MttEntry& e = f.mtt.entry(PageAddr{p});
      CHECK(e.owner.has_value() ==
            (e.state == PageState::ConfidentialAssigned));
      CHECK(e.use.has_value() == e.owner.has_value());
    }
  }
}
