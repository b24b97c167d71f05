// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/tsm_driver.hpp"

#include <cassert>
#include <cstring>

namespace cove {

namespace {

uint64_t blob_pages(const std::vector<uint8_t>& blob) {
  return std::max<uint64_t>(1, (blob.size() + kPageSize - 1) / kPageSize);
}

}  // namespace

TsmDriver::TsmDriver(MemoryTracker& mtt, PhysicalMemory& mem, Tsm& tsm)
    : mtt_(mtt), mem_(mem), tsm_(tsm) {}

AbiStatus TsmDriver::boot(const BootParams& params) {
  if (booted_) return AbiStatus::AlreadyBooted;

  const uint64_t driver_pages = blob_pages(params.tsm_driver_blob);
  const uint64_t tsm_pages = blob_pages(params.tsm_blob);
  if (driver_pages + tsm_pages >= mem_.page_count()) {
    return AbiStatus::OutOfBounds;
  }

  measurements_.tsm_driver_digest = crypto::sha256(params.tsm_driver_blob);
  measurements_.tsm_digest = crypto::sha256(params.tsm_blob);
  measurements_.tsm_version = kTsmVersion;
  measurements_.debug_platform = params.debug_platform;

  // TCB images live at the top of physical memory: the TSM-driver above the
  // TSM, both tracked as TSM-internal confidential pages.
  auto place = [this](const std::vector<uint8_t>& blob, PageAddr start,
                      uint64_t pages) {
    MttStatus s = mtt_.convert_range(start, pages);
    assert(s == MttStatus::Ok);
    (void)s;
    for (uint64_t i = 0; i < pages; ++i) {
      PageAddr p{start.num + i};
      mtt_.assign_page(p, PageOwner::tsm(), PageUse::TsmInternal);
      auto dst = mem_.page(p);
      size_t off = i * kPageSize;
      size_t n = blob.size() > off ? std::min<size_t>(kPageSize, blob.size() - off)
                                   : 0;
      if (n > 0) std::memcpy(dst.data(), blob.data() + off, n);
    }
  };
  PageAddr driver_start{mem_.page_count() - driver_pages};
  PageAddr tsm_start{driver_start.num - tsm_pages};
  place(params.tsm_driver_blob, driver_start, driver_pages);
  place(params.tsm_blob, tsm_start, tsm_pages);

  identity_ = attest::PlatformIdentity::derive(
      params.root_secret, measurements_.tsm_driver_digest,
      measurements_.tsm_digest, measurements_.tsm_version,
      measurements_.debug_platform);
  tsm_.attach_identity(&*identity_);

  booted_ = true;
  return AbiStatus::Ok;
}

AbiStatus TsmDriver::teecall_enter(Hart& hart, const CovhCall& call) {
  if (hart.c != 0 || hart.active.kind != HartActivation::Kind::Host ||
      hart.priv != PrivilegeLevel::S || hart.v != 0) {
    return AbiStatus::NotHostContext;
  }

  SavedHostContext saved;
  saved.gprs = hart.gprs;
  saved.priv = hart.priv;
  saved.v = hart.v;
  hart.saved_host_ctx = saved;

  for (size_t i = 0; i < call.args.size(); ++i) {
    hart.write_gpr(kFirstResponseGpr + static_cast<uint32_t>(i), call.args[i]);
  }
  hart.write_gpr(16, call.fn);  // a6 selects the function
  hart.c = 1;
  hart.active = {HartActivation::Kind::TsmContext, 0, 0};
  return AbiStatus::Ok;
}

AbiStatus TsmDriver::teeret(Hart& hart, const TsmResponse& response) {
  if (hart.c != 1 || hart.active.kind != HartActivation::Kind::TsmContext) {
    return AbiStatus::NotTsmContext;
  }
  assert(hart.saved_host_ctx.has_value());

  // Restore everything, then overwrite only the response registers; any
  // value the TSM left in a register is unobservable afterwards.
  const SavedHostContext& saved = *hart.saved_host_ctx;
  hart.gprs = saved.gprs;
  hart.priv = saved.priv;
  hart.v = saved.v;
  hart.write_gpr(kFirstResponseGpr, static_cast<uint64_t>(response.status));
  for (size_t i = 0; i < response.values.size(); ++i) {
    hart.write_gpr(kFirstResponseGpr + 1 + static_cast<uint32_t>(i),
                   response.values[i]);
  }
  hart.c = 0;
  hart.active = {HartActivation::Kind::Host, 0, 0};
  hart.saved_host_ctx.reset();
  return AbiStatus::Ok;
}

TeecallOutcome TsmDriver::teecall(Hart& hart, const CovhCall& call) {
  TeecallOutcome out;
  AbiStatus entered = teecall_enter(hart, call);
  if (entered != AbiStatus::Ok) {
    out.refused = entered;
    return out;
  }
  if (!booted_) {
    out.response = TsmResponse::err(AbiStatus::NotBooted);
  } else {
    out.response = tsm_.dispatch(call, hart);
  }
  if (scratch_hook_) scratch_hook_(hart);
  AbiStatus ret = teeret(hart, out.response);
  assert(ret == AbiStatus::Ok);
  (void)ret;
  return out;
}

}  // namespace cove
