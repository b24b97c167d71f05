// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/tsm.hpp"

#include <cassert>
#include <cstring>

namespace cove {

namespace {

// Offsets of the serialized vcpu context inside backing page 0.
constexpr uint64_t kVcpuGprOffset = 0;
constexpr uint64_t kVcpuPcOffset = kGprCount * 8;

bool page_aligned(uint64_t addr) { return (addr & (kPageSize - 1)) == 0; }

}  // namespace

Tsm::Tsm(MemoryTracker& mtt, PhysicalMemory& mem, uint64_t max_tvms)
    : mtt_(mtt), mem_(mem), max_tvms_(max_tvms) {}

Tvm* Tsm::lookup(TvmId id) {
  auto it = tvms_.find(id);
  return it == tvms_.end() ? nullptr : &it->second;
}

const Tvm* Tsm::find_tvm(TvmId id) const {
  auto it = tvms_.find(id);
  return it == tvms_.end() ? nullptr : &it->second;
}

std::optional<PageAddr> Tsm::checked_page(uint64_t byte_addr) const {
  if (!page_aligned(byte_addr)) return std::nullopt;
  PageAddr p = PageAddr::from_byte_addr(byte_addr);
  if (!mtt_.contains(p)) return std::nullopt;
  return p;
}

TsmResponse Tsm::dispatch(const CovhCall& call, Hart& hart) {
  // The TSM's working set: scratch registers carry internal state while in
  // TSM context. TEERET must make all of this invisible to the host.
  ++dispatch_count_;
  hart.write_gpr(5, dispatch_count_ * 0x9E3779B97F4A7C15ull);
  hart.write_gpr(6, call.fn ^ 0xC0FFEE0000000000ull);
  hart.write_gpr(7, dispatch_count_ ^ call.args[0]);

  const auto& a = call.args;
  switch (call.fn) {
    case kCovhTsmInfo: return tsm_info();
    case kCovhConvertPages: return convert_pages(a[0], a[1]);
    case kCovhTvmCreate: return tvm_create(a[0], a[1], a[2]);
    case kCovhAddPageTablePages:
      return tvm_add_page_table_pages(a[0], a[1], a[2]);
    case kCovhAddMemoryRegion:
      return tvm_add_memory_region(a[0], a[1], a[2], a[3]);
    case kCovhAddMeasuredPages:
      return tvm_add_measured_pages(a[0], a[1], a[2], a[3]);
    case kCovhCreateVcpu:
      return tvm_create_vcpu(a[0], a[1], a[2], a[3], call.program);
    case kCovhFinalize: return tvm_finalize(a[0]);
    case kCovhRun: return tvm_run(a[0], a[1], hart);
    case kCovhAddZeroPages: return tvm_add_zero_pages(a[0], a[1], a[2]);
    case kCovhAddSharedPages: return tvm_add_shared_pages(a[0], a[1], a[2]);
    case kCovhDestroy: return tvm_destroy(a[0]);
    // Reassignment of free confidential memory is the same verified
    // assign-and-map path as demand-zero addition.
    case kCovhReassignPages: return tvm_add_zero_pages(a[0], a[1], a[2]);
    case kCovhReclaimPages: return reclaim_pages(a[0], a[1]);
    case kCoviBindInterruptFile:
      return TsmResponse::err(covi_bind_interrupt_file(a[0], a[1], a[2]));
    default: return TsmResponse::err(AbiStatus::UnknownFunction);
  }
}

TsmResponse Tsm::tsm_info() {
  TsmResponse r;
  r.values[0] = kTsmVersion;
  r.values[1] = kCapCovh | kCapCovg | kCapCovi;
  r.values[2] = kPageSize;
  r.values[3] = max_tvms_;
  return r;
}

TsmResponse Tsm::convert_pages(uint64_t base, uint64_t count) {
  if (!page_aligned(base) || count == 0) {
    return TsmResponse::err(AbiStatus::InvalidAddress);
  }
  switch (mtt_.convert_range(PageAddr::from_byte_addr(base), count)) {
    case MttStatus::Ok: break;
    case MttStatus::OutOfBounds:
      return TsmResponse::err(AbiStatus::OutOfBounds);
    default: return TsmResponse::err(AbiStatus::AlreadyConfidential);
  }
  // The pages just left the non-confidential world; any shared mapping a
  // TVM still held on them is withdrawn (the guest will re-fault).
  revoke_shared_mappings(PageAddr::from_byte_addr(base), count);
  return {};
}

TsmResponse Tsm::reclaim_pages(uint64_t base, uint64_t count) {
  if (!page_aligned(base) || count == 0) {
    return TsmResponse::err(AbiStatus::InvalidAddress);
  }
  switch (mtt_.reclaim_range(PageAddr::from_byte_addr(base), count)) {
    case MttStatus::Ok: return {};
    case MttStatus::OutOfBounds:
      return TsmResponse::err(AbiStatus::OutOfBounds);
    case MttStatus::PageInUse: return TsmResponse::err(AbiStatus::PageInUse);
    default: return TsmResponse::err(AbiStatus::NotConfidential);
  }
}

TsmResponse Tsm::tvm_create(uint64_t base, uint64_t count, uint64_t debug) {
  if (!page_aligned(base)) return TsmResponse::err(AbiStatus::InvalidAddress);
  if (count < kMinTvmStatePages) {
    return TsmResponse::err(AbiStatus::TooFewPages);
  }
  PageAddr start = PageAddr::from_byte_addr(base);
  if (start.num + count > mtt_.page_count() || start.num + count < start.num) {
    return TsmResponse::err(AbiStatus::OutOfBounds);
  }
  if (tvms_.size() >= max_tvms_) return TsmResponse::err(AbiStatus::TvmLimit);
  for (uint64_t i = 0; i < count; ++i) {
    if (mtt_.entry(PageAddr{start.num + i}).state !=
        PageState::ConfidentialFree) {
      return TsmResponse::err(AbiStatus::PageNotFree);
    }
  }

  TvmId id = next_tvm_id_++;
  Tvm& tvm = tvms_[id];
  tvm.id = id;
  tvm.debug_opt_in = debug != 0;
  for (uint64_t i = 0; i < count; ++i) {
    PageAddr p{start.num + i};
    mtt_.assign_page(p, PageOwner::of_tvm(id), PageUse::TvmState);
    tvm.state_pages.push_back(p);
  }
  write_state_texture(tvm);

  TsmResponse r;
  r.values[0] = id;
  return r;
}

TsmResponse Tsm::tvm_add_page_table_pages(TvmId id, uint64_t base,
                                          uint64_t count) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);
  if (!page_aligned(base) || count == 0) {
    return TsmResponse::err(AbiStatus::InvalidAddress);
  }
  PageAddr start = PageAddr::from_byte_addr(base);
  if (start.num + count > mtt_.page_count() || start.num + count < start.num) {
    return TsmResponse::err(AbiStatus::OutOfBounds);
  }
  for (uint64_t i = 0; i < count; ++i) {
    if (mtt_.entry(PageAddr{start.num + i}).state !=
        PageState::ConfidentialFree) {
      return TsmResponse::err(AbiStatus::PageNotFree);
    }
  }
  for (uint64_t i = 0; i < count; ++i) {
    PageAddr p{start.num + i};
    mtt_.assign_page(p, PageOwner::of_tvm(id), PageUse::GStageTable);
    tvm->table_page_pool.push_back(p);
  }
  return {};
}

TsmResponse Tsm::tvm_add_memory_region(TvmId id, uint64_t kind, uint64_t gpa,
                                       uint64_t count) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);
  if (tvm->phase != TvmPhase::Initializing) {
    return TsmResponse::err(AbiStatus::WrongPhase);
  }
  if (!page_aligned(gpa) || count == 0 || kind > 1 ||
      gpa + count * kPageSize < gpa ||
      gpa + count * kPageSize > kSyntheticGpaBase) {
    return TsmResponse::err(AbiStatus::InvalidAddress);
  }
  MemRegion region{gpa, count,
                   kind == 0 ? MemRegion::Kind::Confidential
                             : MemRegion::Kind::NonConfidentialShared};
  for (const MemRegion& r : tvm->regions) {
    if (r.overlaps(region)) return TsmResponse::err(AbiStatus::Overlap);
  }
  tvm->regions.push_back(region);
  return {};
}

AbiStatus Tsm::map_gpa(Tvm& tvm, uint64_t gpa_page, PageAddr spa,
                       GStageMapping::Kind kind) {
  if (tvm.gstage.contains(gpa_page)) return AbiStatus::GpaAlreadyMapped;
  if (tvm.gstage.size() >= tvm.table_capacity()) {
    return AbiStatus::OutOfTablePages;
  }
  uint64_t slot;
  if (!tvm.free_table_slots.empty()) {
    slot = tvm.free_table_slots.back();
    tvm.free_table_slots.pop_back();
  } else {
    slot = tvm.next_table_slot++;
  }
  tvm.gstage[gpa_page] = {spa, kind, slot};
  // Keep the donated table pages holding something PTE-shaped.
  PageAddr table_page = tvm.table_page_pool[slot / kMappingsPerTablePage];
  uint64_t pte = spa.byte_addr() | (static_cast<uint64_t>(kind) + 1);
  mem_.write_u64(table_page.byte_addr() + (slot % kMappingsPerTablePage) * 8,
                 pte);
  return AbiStatus::Ok;
}

void Tsm::unmap_gpa(Tvm& tvm, uint64_t gpa_page) {
  auto it = tvm.gstage.find(gpa_page);
  if (it == tvm.gstage.end()) return;
  uint64_t slot = it->second.table_slot;
  PageAddr table_page = tvm.table_page_pool[slot / kMappingsPerTablePage];
  mem_.write_u64(table_page.byte_addr() + (slot % kMappingsPerTablePage) * 8,
                 0);
  tvm.free_table_slots.push_back(slot);
  tvm.gstage.erase(it);
}

void Tsm::revoke_shared_mappings(PageAddr start, uint64_t count) {
  for (auto& [id, tvm] : tvms_) {
    std::vector<uint64_t> doomed;
    for (const auto& [gpa_page, mapping] : tvm.gstage) {
      if (mapping.kind == GStageMapping::Kind::Shared &&
          mapping.spa.num >= start.num && mapping.spa.num < start.num + count) {
        doomed.push_back(gpa_page);
      }
    }
    for (uint64_t gpa_page : doomed) unmap_gpa(tvm, gpa_page);
  }
}

TsmResponse Tsm::tvm_add_measured_pages(TvmId id, uint64_t src, uint64_t dest,
                                        uint64_t gpa) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);
  if (tvm->phase != TvmPhase::Initializing) {
    return TsmResponse::err(AbiStatus::WrongPhase);
  }
  if (!page_aligned(gpa)) return TsmResponse::err(AbiStatus::InvalidAddress);
  auto src_page = checked_page(src);
  if (!src_page.has_value() ||
      mtt_.entry(*src_page).state != PageState::NonConfidential) {
    return TsmResponse::err(AbiStatus::BadSource);
  }
  auto dest_page = checked_page(dest);
  if (!dest_page.has_value()) {
    return TsmResponse::err(AbiStatus::InvalidAddress);
  }
  if (mtt_.entry(*dest_page).state != PageState::ConfidentialFree) {
    return TsmResponse::err(AbiStatus::PageNotFree);
  }
  uint64_t gpa_page = gpa >> kPageShift;
  const MemRegion* region = tvm->find_region(gpa_page);
  if (region == nullptr || region->kind != MemRegion::Kind::Confidential) {
    return TsmResponse::err(AbiStatus::GpaUnmappedRegion);
  }
  if (tvm->gstage.contains(gpa_page)) {
    return TsmResponse::err(AbiStatus::GpaAlreadyMapped);
  }
  if (tvm->gstage.size() >= tvm->table_capacity()) {
    return TsmResponse::err(AbiStatus::OutOfTablePages);
  }

  mtt_.assign_page(*dest_page, PageOwner::of_tvm(id), PageUse::TvmData);
  mem_.copy_page(*src_page, *dest_page);
  AbiStatus mapped = map_gpa(*tvm, gpa_page, *dest_page,
                             GStageMapping::Kind::Measured);
  assert(mapped == AbiStatus::Ok);
  (void)mapped;
  tvm->measurement.extend(gpa, crypto::sha256(mem_.page(*dest_page)));
  write_state_texture(*tvm);
  return {};
}

TsmResponse Tsm::tvm_create_vcpu(TvmId id, VcpuId vcpu_id, uint64_t base,
                                 uint64_t count, const TvmProgram* program) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);
  if (tvm->phase != TvmPhase::Initializing) {
    return TsmResponse::err(AbiStatus::WrongPhase);
  }
  if (tvm->vcpus.contains(vcpu_id)) {
    return TsmResponse::err(AbiStatus::DuplicateVcpu);
  }
  if (!page_aligned(base) || count == 0) {
    return TsmResponse::err(AbiStatus::InvalidAddress);
  }
  PageAddr start = PageAddr::from_byte_addr(base);
  if (start.num + count > mtt_.page_count() || start.num + count < start.num) {
    return TsmResponse::err(AbiStatus::OutOfBounds);
  }
  for (uint64_t i = 0; i < count; ++i) {
    if (mtt_.entry(PageAddr{start.num + i}).state !=
        PageState::ConfidentialFree) {
      return TsmResponse::err(AbiStatus::PageNotFree);
    }
  }
  static const TvmProgram kEmpty;
  const TvmProgram& prog = program != nullptr ? *program : kEmpty;
  for (const Action& a : prog) {
    if (a.kind == Action::Kind::Touch && (a.gpa & 7) != 0) {
      return TsmResponse::err(AbiStatus::InvalidAddress);
    }
  }

  VcpuContext ctx;
  ctx.vcpu_id = vcpu_id;
  ctx.program = prog;
  for (uint64_t i = 0; i < count; ++i) {
    PageAddr p{start.num + i};
    mtt_.assign_page(p, PageOwner::of_tvm(id), PageUse::VcpuState);
    ctx.backing_pages.push_back(p);
  }
  tvm->vcpus.emplace(vcpu_id, std::move(ctx));
  tvm->measurement.extend(kSyntheticGpaBase | vcpu_id,
                          crypto::sha256(encode_vcpu_program(vcpu_id, prog)));
  write_state_texture(*tvm);
  return {};
}

TsmResponse Tsm::tvm_finalize(TvmId id) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);
  if (tvm->phase != TvmPhase::Initializing) {
    return TsmResponse::err(AbiStatus::WrongPhase);
  }
  if (tvm->vcpus.empty()) return TsmResponse::err(AbiStatus::NoVcpus);
  tvm->phase = TvmPhase::Runnable;
  write_state_texture(*tvm);

  // Measurements are not secret; the digest goes back to the host.
  TsmResponse r;
  std::memcpy(r.values.data(), tvm->measurement.digest().data(), 32);
  return r;
}

const GStageMapping* Tsm::translate(const Tvm& tvm, uint64_t gpa_page,
                                    AccessKind kind) const {
  if (tvm.find_region(gpa_page) == nullptr) return nullptr;
  if (!tvm.table_page_pool.empty()) {
    // The G-stage walk itself touches confidential table memory and is
    // subject to the same MTT check as any other access.
    AccessDecision walk = mtt_.check(
        tvm.table_page_pool.front(),
        AccessContext::of_tvm(tvm.id, AccessKind::PageWalk));
    if (!walk.allow) return nullptr;
  }
  auto it = tvm.gstage.find(gpa_page);
  if (it == tvm.gstage.end()) return nullptr;
  // Shared pages are mapped without execute permission.
  if (kind == AccessKind::Fetch &&
      it->second.kind == GStageMapping::Kind::Shared) {
    return nullptr;
  }
  return &it->second;
}

void Tsm::restore_vcpu(VcpuContext& vcpu, Hart& hart) {
  PageAddr p = vcpu.backing_pages.front();
  for (uint32_t i = 1; i < kGprCount; ++i) {
    hart.gprs[i] = mem_.read_u64(p.byte_addr() + kVcpuGprOffset + i * 8);
  }
  hart.gprs[0] = 0;
  vcpu.pc = mem_.read_u64(p.byte_addr() + kVcpuPcOffset);
}

void Tsm::save_vcpu(VcpuContext& vcpu, const Hart& hart) {
  PageAddr p = vcpu.backing_pages.front();
  for (uint32_t i = 0; i < kGprCount; ++i) {
    mem_.write_u64(p.byte_addr() + kVcpuGprOffset + i * 8, hart.gprs[i]);
  }
  mem_.write_u64(p.byte_addr() + kVcpuPcOffset, vcpu.pc);
  vcpu.gprs = hart.gprs;
}

InterruptFile* Tsm::file_of(TvmId tvm, VcpuId vcpu) {
  for (auto& [id, file] : files_) {
    if (file.bound_to.has_value() && file.bound_to->first == tvm &&
        file.bound_to->second == vcpu) {
      return &file;
    }
  }
  return nullptr;
}

void Tsm::sync_interrupt_file(const InterruptFile& file) {
  mem_.write_u64(file.backing_page.byte_addr(), file.pending_mask());
}

Tsm::ActionOutcome Tsm::exec_action(Tvm& tvm, VcpuContext& vcpu,
                                    const Action& action, Hart& hart,
                                    bool advance_pc) {
  ActionOutcome out;
  hart.write_gpr(5, hart.read_gpr(5) + 1);  // retired-action counter

  switch (action.kind) {
    case Action::Kind::Touch: {
      uint64_t gpa_page = action.gpa >> kPageShift;
      const GStageMapping* mapping = translate(tvm, gpa_page, action.access);
      if (mapping == nullptr) {
        out.kind = ActionOutcome::Kind::Exit;
        out.exit = {TvmExit::Reason::GuestPageFault, action.gpa, 0, 0};
        return out;  // pc unchanged: the access retries after the host maps
      }
      AccessDecision d =
          mtt_.check(mapping->spa, AccessContext::of_tvm(tvm.id, action.access));
      if (!d.allow) {
        out.kind = ActionOutcome::Kind::Exit;
        out.exit = {TvmExit::Reason::GuestPageFault, action.gpa, 0, 0};
        return out;
      }
      uint64_t addr = mapping->spa.byte_addr() + (action.gpa & (kPageSize - 1));
      if (action.access == AccessKind::Store) {
        mem_.write_u64(addr, action.value);
      } else {
        uint64_t v = mem_.read_u64(addr);
        if (action.access == AccessKind::Load) hart.write_gpr(10, v);
        out.value = v;
      }
      if (advance_pc) ++vcpu.pc;
      return out;
    }
    case Action::Kind::Covg: {
      AbiStatus status;
      bool request_exit = false;
      switch (action.covg_fn) {
        case kCovgGetEvidence:
          status = covg_get_evidence(tvm, action.report_data);
          break;
        case kCovgShare:
          status = covg_share(tvm, action.covg_args[0], action.covg_args[1]);
          request_exit = true;
          break;
        case kCovgUnshare:
          status = covg_unshare(tvm, action.covg_args[0], action.covg_args[1]);
          request_exit = true;
          break;
        default:
          status = AbiStatus::UnknownFunction;
          break;
      }
      hart.write_gpr(10, static_cast<uint64_t>(status));
      out.covg_status = status;
      if (advance_pc) ++vcpu.pc;
      if (request_exit) {
        // Sharing intent is surfaced to the host so it can map/unmap.
        out.kind = ActionOutcome::Kind::Exit;
        out.exit = {TvmExit::Reason::GuestRequest, action.covg_fn,
                    action.covg_args[0], action.covg_args[1]};
      }
      return out;
    }
    case Action::Kind::Wfi: {
      if (advance_pc) ++vcpu.pc;
      InterruptFile* file = file_of(tvm.id, vcpu.vcpu_id);
      out.kind = ActionOutcome::Kind::Exit;
      if (file != nullptr && !file->pending.empty()) {
        out.exit = {TvmExit::Reason::InterruptPending, file->pending_mask(), 0,
                    0};
        file->pending.clear();  // claimed by the guest
        sync_interrupt_file(*file);
      } else {
        out.exit = {TvmExit::Reason::Wfi, 0, 0, 0};
      }
      return out;
    }
    case Action::Kind::Exit: {
      if (advance_pc) ++vcpu.pc;
      vcpu.runnable = false;
      vcpu.halt_code = action.value;
      out.kind = ActionOutcome::Kind::Exit;
      out.exit = {TvmExit::Reason::Halted, action.value, 0, 0};
      return out;
    }
  }
  return out;
}

TsmResponse Tsm::tvm_run(TvmId id, VcpuId vcpu_id, Hart& hart) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);
  if (tvm->phase != TvmPhase::Runnable) {
    return TsmResponse::err(AbiStatus::WrongPhase);
  }
  auto it = tvm->vcpus.find(vcpu_id);
  if (it == tvm->vcpus.end()) return TsmResponse::err(AbiStatus::UnknownVcpu);
  VcpuContext& vcpu = it->second;

  TsmResponse r;
  if (!vcpu.runnable) {
    r.values[0] = static_cast<uint64_t>(TvmExit::Reason::Halted);
    r.values[1] = vcpu.halt_code;
    return r;
  }

  // Enter confidential VS-mode for this vcpu.
  restore_vcpu(vcpu, hart);
  hart.v = 1;
  hart.c = 1;
  hart.priv = PrivilegeLevel::S;
  hart.active = {HartActivation::Kind::TvmContext, id, vcpu_id};

  if (InterruptFile* file = file_of(id, vcpu_id)) {
    vcpu.observed_irqs = file->pending;
  }

  TvmExit exit{};
  while (true) {
    if (vcpu.pc >= vcpu.program.size()) {
      vcpu.runnable = false;
      vcpu.halt_code = 0;
      exit = {TvmExit::Reason::Halted, 0, 0, 0};
      break;
    }
    ActionOutcome out =
        exec_action(*tvm, vcpu, vcpu.program[vcpu.pc], hart, true);
    if (out.kind == ActionOutcome::Kind::Exit) {
      exit = out.exit;
      break;
    }
  }

  save_vcpu(vcpu, hart);
  hart.v = 0;
  hart.active = {HartActivation::Kind::TsmContext, 0, 0};

  r.values[0] = static_cast<uint64_t>(exit.reason);
  r.values[1] = exit.detail0;
  r.values[2] = exit.detail1;
  r.values[3] = exit.detail2;
  return r;
}

TsmResponse Tsm::tvm_add_zero_pages(TvmId id, uint64_t dest, uint64_t gpa) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);
  if (tvm->phase != TvmPhase::Runnable) {
    return TsmResponse::err(AbiStatus::WrongPhase);
  }
  if (!page_aligned(gpa)) return TsmResponse::err(AbiStatus::InvalidAddress);
  auto dest_page = checked_page(dest);
  if (!dest_page.has_value()) {
    return TsmResponse::err(AbiStatus::InvalidAddress);
  }
  if (mtt_.entry(*dest_page).state != PageState::ConfidentialFree) {
    return TsmResponse::err(AbiStatus::PageNotFree);
  }
  uint64_t gpa_page = gpa >> kPageShift;
  const MemRegion* region = tvm->find_region(gpa_page);
  if (region == nullptr || region->kind != MemRegion::Kind::Confidential) {
    return TsmResponse::err(AbiStatus::GpaUnmappedRegion);
  }
  if (tvm->gstage.contains(gpa_page)) {
    return TsmResponse::err(AbiStatus::GpaAlreadyMapped);
  }
  if (tvm->gstage.size() >= tvm->table_capacity()) {
    return TsmResponse::err(AbiStatus::OutOfTablePages);
  }

  mtt_.assign_page(*dest_page, PageOwner::of_tvm(id), PageUse::TvmData);
  mem_.zero_page(*dest_page);
  AbiStatus mapped =
      map_gpa(*tvm, gpa_page, *dest_page, GStageMapping::Kind::Zero);
  assert(mapped == AbiStatus::Ok);
  (void)mapped;
  return {};
}

TsmResponse Tsm::tvm_add_shared_pages(TvmId id, uint64_t src, uint64_t gpa) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);
  if (tvm->phase != TvmPhase::Runnable) {
    return TsmResponse::err(AbiStatus::WrongPhase);
  }
  if (!page_aligned(gpa)) return TsmResponse::err(AbiStatus::InvalidAddress);
  auto src_page = checked_page(src);
  if (!src_page.has_value()) return TsmResponse::err(AbiStatus::InvalidAddress);
  if (mtt_.entry(*src_page).state != PageState::NonConfidential) {
    return TsmResponse::err(AbiStatus::SourceConfidential);
  }
  uint64_t gpa_page = gpa >> kPageShift;
  const MemRegion* region = tvm->find_region(gpa_page);
  if (region == nullptr ||
      region->kind != MemRegion::Kind::NonConfidentialShared) {
    return TsmResponse::err(AbiStatus::GpaUnmappedRegion);
  }
  if (!tvm->shared_offers.contains(gpa_page)) {
    return TsmResponse::err(AbiStatus::GpaNotShared);
  }
  if (tvm->gstage.contains(gpa_page)) {
    return TsmResponse::err(AbiStatus::GpaAlreadyMapped);
  }
  if (tvm->gstage.size() >= tvm->table_capacity()) {
    return TsmResponse::err(AbiStatus::OutOfTablePages);
  }
  AbiStatus mapped =
      map_gpa(*tvm, gpa_page, *src_page, GStageMapping::Kind::Shared);
  assert(mapped == AbiStatus::Ok);
  (void)mapped;
  return {};
}

TsmResponse Tsm::tvm_destroy(TvmId id) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return TsmResponse::err(AbiStatus::UnknownTvm);

  std::vector<PageAddr> owned;
  owned.insert(owned.end(), tvm->state_pages.begin(), tvm->state_pages.end());
  owned.insert(owned.end(), tvm->table_page_pool.begin(),
               tvm->table_page_pool.end());
  for (const auto& [gpa_page, mapping] : tvm->gstage) {
    if (mapping.kind != GStageMapping::Kind::Shared) owned.push_back(mapping.spa);
  }
  for (const auto& [vcpu_id, vcpu] : tvm->vcpus) {
    owned.insert(owned.end(), vcpu.backing_pages.begin(),
                 vcpu.backing_pages.end());
  }
  std::vector<uint64_t> dead_files;
  for (const auto& [file_id, file] : files_) {
    if (file.bound_to.has_value() && file.bound_to->first == id) {
      owned.push_back(file.backing_page);
      dead_files.push_back(file_id);
    }
  }

  for (PageAddr p : owned) {
    MttStatus released = mtt_.release_page(p);
    assert(released == MttStatus::Ok);
    (void)released;
  }
  for (uint64_t file_id : dead_files) files_.erase(file_id);

  // Ids are never reused, so the record can go away entirely; any later
  // call on this id resolves to UnknownTvm.
  tvms_.erase(id);
  return {};
}

AbiStatus Tsm::covg_share(Tvm& tvm, uint64_t gpa, uint64_t count) {
  if (!page_aligned(gpa)) return AbiStatus::InvalidAddress;
  uint64_t first = gpa >> kPageShift;
  for (uint64_t i = 0; i < count; ++i) {
    const MemRegion* region = tvm.find_region(first + i);
    if (region == nullptr ||
        region->kind != MemRegion::Kind::NonConfidentialShared) {
      return AbiStatus::GpaUnmappedRegion;
    }
  }
  for (uint64_t i = 0; i < count; ++i) tvm.shared_offers.insert(first + i);
  return AbiStatus::Ok;
}

AbiStatus Tsm::covg_unshare(Tvm& tvm, uint64_t gpa, uint64_t count) {
  if (!page_aligned(gpa)) return AbiStatus::InvalidAddress;
  uint64_t first = gpa >> kPageShift;
  for (uint64_t i = 0; i < count; ++i) {
    const MemRegion* region = tvm.find_region(first + i);
    if (region == nullptr ||
        region->kind != MemRegion::Kind::NonConfidentialShared) {
      return AbiStatus::GpaUnmappedRegion;
    }
  }
  for (uint64_t i = 0; i < count; ++i) {
    tvm.shared_offers.erase(first + i);
    auto it = tvm.gstage.find(first + i);
    if (it != tvm.gstage.end() &&
        it->second.kind == GStageMapping::Kind::Shared) {
      unmap_gpa(tvm, first + i);
    }
  }
  return AbiStatus::Ok;
}

AbiStatus Tsm::covg_get_evidence(Tvm& tvm,
                                 const std::array<uint8_t, 64>& report_data) {
  if (identity_ == nullptr) return AbiStatus::NotBooted;
  last_evidence_ = identity_->issue_tvm_evidence(
      tvm.id, tvm.measurement.digest(), tvm.debug_opt_in, report_data);
  return AbiStatus::Ok;
}

AbiStatus Tsm::covi_bind_interrupt_file(TvmId id, VcpuId vcpu,
                                        uint64_t page_addr) {
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) return AbiStatus::UnknownTvm;
  auto it = tvm->vcpus.find(vcpu);
  if (it == tvm->vcpus.end()) return AbiStatus::UnknownVcpu;
  if (it->second.interrupt_file.has_value()) return AbiStatus::AlreadyBound;
  auto page = checked_page(page_addr);
  if (!page.has_value()) return AbiStatus::InvalidAddress;
  if (mtt_.entry(*page).state != PageState::ConfidentialFree) {
    return AbiStatus::PageNotFree;
  }

  mtt_.assign_page(*page, PageOwner::of_tvm(id), PageUse::InterruptFile);
  uint64_t file_id = next_file_id_++;
  InterruptFile file;
  file.file_id = file_id;
  file.backing_page = *page;
  file.bound_to = {id, vcpu};
  files_.emplace(file_id, std::move(file));
  it->second.interrupt_file = file_id;
  return AbiStatus::Ok;
}

GuestActionResult Tsm::guest_action(TvmId id, VcpuId vcpu_id,
                                    const Action& action, Hart& hart) {
  GuestActionResult result;
  Tvm* tvm = lookup(id);
  if (tvm == nullptr) {
    result.status = AbiStatus::UnknownTvm;
    return result;
  }
  if (tvm->phase != TvmPhase::Runnable) {
    result.status = AbiStatus::WrongPhase;
    return result;
  }
  auto it = tvm->vcpus.find(vcpu_id);
  if (it == tvm->vcpus.end()) {
    result.status = AbiStatus::UnknownVcpu;
    return result;
  }
  if (action.kind == Action::Kind::Touch && (action.gpa & 7) != 0) {
    result.status = AbiStatus::InvalidAddress;
    return result;
  }
  VcpuContext& vcpu = it->second;

  restore_vcpu(vcpu, hart);
  hart.v = 1;
  hart.c = 1;
  hart.priv = PrivilegeLevel::S;
  hart.active = {HartActivation::Kind::TvmContext, id, vcpu_id};

  ActionOutcome out = exec_action(*tvm, vcpu, action, hart, false);

  save_vcpu(vcpu, hart);
  hart.v = 0;
  hart.active = {HartActivation::Kind::TsmContext, 0, 0};

  if (out.covg_status.has_value()) result.status = *out.covg_status;
  if (out.kind == ActionOutcome::Kind::Exit) result.exit = out.exit;
  result.value = out.value;
  return result;
}

InjectStatus Tsm::inject(TvmId tvm, VcpuId vcpu, uint32_t irq) {
  InterruptFile* file = file_of(tvm, vcpu);
  if (file == nullptr) return InjectStatus::Unbound;
  InjectStatus s = inject_interrupt(*file, irq);
  if (s == InjectStatus::Ok) sync_interrupt_file(*file);
  return s;
}

IntFileAccessResult Tsm::interrupt_file_access(TvmId tvm, VcpuId vcpu,
                                               Hart& hart, AccessKind kind,
                                               uint64_t value,
                                               AbiStatus& status) {
  status = AbiStatus::Ok;
  InterruptFile* file = file_of(tvm, vcpu);
  if (file == nullptr) {
    status = AbiStatus::Unbound;
    return {};
  }
  IntFileAccessResult r = cove::interrupt_file_access(hart, *file, kind, value);
  if (!r.exc.has_value() && kind == AccessKind::Store) {
    sync_interrupt_file(*file);
  }
  return r;
}

IntFileAccessResult Tsm::guest_intfile_access(TvmId actor, VcpuId actor_vcpu,
                                              TvmId target, VcpuId target_vcpu,
                                              Hart& hart, AccessKind kind,
                                              uint64_t value,
                                              AbiStatus& status) {
  status = AbiStatus::Ok;
  Tvm* tvm = lookup(actor);
  if (tvm == nullptr) {
    status = AbiStatus::UnknownTvm;
    return {};
  }
  if (tvm->phase != TvmPhase::Runnable) {
    status = AbiStatus::WrongPhase;
    return {};
  }
  if (!tvm->vcpus.contains(actor_vcpu)) {
    status = AbiStatus::UnknownVcpu;
    return {};
  }
  InterruptFile* file = file_of(target, target_vcpu);
  if (file == nullptr) {
    status = AbiStatus::Unbound;
    return {};
  }

  hart.v = 1;
  hart.c = 1;
  hart.priv = PrivilegeLevel::S;
  hart.active = {HartActivation::Kind::TvmContext, actor, actor_vcpu};

  IntFileAccessResult r = cove::interrupt_file_access(hart, *file, kind, value);
  if (!r.exc.has_value() && kind == AccessKind::Store) {
    sync_interrupt_file(*file);
  }

  hart.v = 0;
  hart.active = {HartActivation::Kind::TsmContext, 0, 0};
  return r;
}

void Tsm::write_state_texture(Tvm& tvm) {
  if (tvm.state_pages.empty()) return;
  PageAddr p = tvm.state_pages.front();
  auto page = mem_.page(p);
  std::memcpy(page.data(), tvm.measurement.digest().data(), 32);
  page[32] = static_cast<uint8_t>(tvm.phase);
}

}  // namespace cove
