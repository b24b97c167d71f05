// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/platform.hpp"

namespace cove {

PlatformConfig PlatformConfig::defaults() {
  PlatformConfig cfg;
  const char* tsm = "cove-sim reference TSM image";
  const char* driver = "cove-sim reference TSM-driver image";
  cfg.tsm_blob.assign(tsm, tsm + std::char_traits<char>::length(tsm));
  cfg.tsm_driver_blob.assign(driver,
                             driver + std::char_traits<char>::length(driver));
  cfg.root_secret.fill(0x01);
  return cfg;
}

bool PlatformConfig::valid() const {
  if (memory_pages < 8 || memory_pages > 65536) return false;
  if (hart_count < 1 || hart_count > 64) return false;
  if (max_tvms < 1 || max_tvms > 1024) return false;
  return true;
}

Platform::Platform(PlatformConfig config)
    : config_(std::move(config)),
      mem_(config_.memory_pages),
      mtt_(mem_),
      tsm_(mtt_, mem_, config_.max_tvms),
      driver_(mtt_, mem_, tsm_) {
  for (uint32_t i = 0; i < config_.hart_count; ++i) {
    Hart h;
    h.hart_id = i;
    harts_.push_back(h);
  }
}

AbiStatus Platform::boot() {
  BootParams params;
  params.tsm_driver_blob = config_.tsm_driver_blob;
  params.tsm_blob = config_.tsm_blob;
  params.root_secret = config_.root_secret;
  params.debug_platform = config_.debug_platform;
  return driver_.boot(params);
}

CovhResult Platform::covh(uint32_t hart_id, const CovhCall& call) {
  CovhResult result;
  TeecallOutcome out = driver_.teecall(harts_.at(hart_id), call);
  result.refused = out.refused;
  result.response = out.response;
  return result;
}

AccessResult Platform::host_access(uint32_t hart_id, uint64_t addr,
                                   AccessKind kind, uint64_t store_value) {
  AccessResult result;
  Hart& hart = harts_.at(hart_id);
  if ((addr & 7) != 0) {
    result.unaligned = true;
    return result;
  }
  PageAddr page = PageAddr::from_byte_addr(addr);
  if (!mem_.contains(page)) {
    result.exception = Exception::fault(ExceptionKind::AccessFault, page);
    return result;
  }
  AccessContext ctx{hart.c,
                    hart.c == 0 ? AccessContext::Domain::Host
                                : AccessContext::Domain::Tsm,
                    0, kind};
  AccessDecision d = mtt_.check(page, ctx);
  if (!d.allow) {
    result.exception = Exception::fault(*d.fault == FaultKind::AccessFault
                                            ? ExceptionKind::AccessFault
                                            : ExceptionKind::GuestPageFault,
                                        page);
    return result;
  }
  if (kind == AccessKind::Store) {
    mem_.write_u64(addr, store_value);
    result.value = store_value;
  } else {
    result.value = mem_.read_u64(addr);
  }
  return result;
}

GuestActionResult Platform::guest_action(uint32_t hart_id, TvmId tvm,
                                         VcpuId vcpu, const Action& action) {
  Hart& hart = harts_.at(hart_id);
  if (!driver_.booted()) return {AbiStatus::NotBooted, std::nullopt, std::nullopt};

  // The switch rides the same save/restore machinery as a TEECALL so host
  // register state stays isolated from the guest context.
  CovhCall pseudo;
  AbiStatus entered = driver_.teecall_enter(hart, pseudo);
  if (entered != AbiStatus::Ok) {
    return {entered, std::nullopt, std::nullopt};
  }
  GuestActionResult result = tsm_.guest_action(tvm, vcpu, action, hart);

  TsmResponse response;
  response.status = result.status;
  if (result.exit.has_value()) {
    response.values[0] = static_cast<uint64_t>(result.exit->reason);
    response.values[1] = result.exit->detail0;
    response.values[2] = result.exit->detail1;
    response.values[3] = result.exit->detail2;
  }
  if (result.value.has_value()) response.values[4] = *result.value;
  driver_.teeret(hart, response);
  return result;
}

AbiStatus Platform::inject_interrupt(TvmId tvm, VcpuId vcpu, uint32_t irq) {
  switch (tsm_.inject(tvm, vcpu, irq)) {
    case InjectStatus::Ok: return AbiStatus::Ok;
    case InjectStatus::InvalidIrq: return AbiStatus::InvalidIrq;
    case InjectStatus::Unbound: return AbiStatus::Unbound;
  }
  return AbiStatus::Unbound;
}

IntFileResult Platform::intfile_access(uint32_t hart_id, TvmId tvm, VcpuId vcpu,
                                       AccessKind kind, uint64_t store_value) {
  IntFileResult result;
  Hart& hart = harts_.at(hart_id);
  IntFileAccessResult r =
      tsm_.interrupt_file_access(tvm, vcpu, hart, kind, store_value,
                                 result.status);
  if (result.status != AbiStatus::Ok) return result;
  result.exception = r.exc;
  result.value = r.value;
  return result;
}

IntFileResult Platform::guest_intfile_access(uint32_t hart_id, TvmId actor,
                                             VcpuId actor_vcpu, TvmId target,
                                             VcpuId target_vcpu,
                                             AccessKind kind,
                                             uint64_t store_value) {
  IntFileResult result;
  Hart& hart = harts_.at(hart_id);
  if (!driver_.booted()) {
    result.status = AbiStatus::NotBooted;
    return result;
  }
  CovhCall pseudo;
  AbiStatus entered = driver_.teecall_enter(hart, pseudo);
  if (entered != AbiStatus::Ok) {
    result.status = entered;
    return result;
  }
  IntFileAccessResult r =
      tsm_.guest_intfile_access(actor, actor_vcpu, target, target_vcpu, hart,
                                kind, store_value, result.status);
  TsmResponse response;
  response.status = result.status;
  response.values[4] = r.value;
  driver_.teeret(hart, response);
  if (result.status != AbiStatus::Ok) return result;
  result.exception = r.exc;
  result.value = r.value;
  return result;
}

}  // namespace cove
