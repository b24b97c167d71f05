// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/hart.hpp"

namespace cove {

const char* to_string(PrivilegeLevel p) {
  switch (p) {
    case PrivilegeLevel::U: return "U";
    case PrivilegeLevel::S: return "S";
    case PrivilegeLevel::M: return "M";
  }
  return "?";
}

bool is_legal_mode(uint8_t v, PrivilegeLevel priv, uint8_t c) {
  if (v > 1 || c > 1) return false;
  if (v == 0) {
    // U, HS, M rows all carry C=0; confidential non-virtualized rows are
    // reserved.
    return c == 0;
  }
  // VU / VS rows exist at both C values; M-mode cannot be virtualized.
  return priv != PrivilegeLevel::M;
}

bool is_legal_hart_state(const Hart& hart) {
  if (hart.gprs[0] != 0) return false;
  const bool in_tsm = hart.active.kind == HartActivation::Kind::TsmContext;
  if (in_tsm) {
    // TSM flows run HS-mode code with the confidential qualifier raised.
    return hart.v == 0 && hart.priv == PrivilegeLevel::S && hart.c == 1;
  }
  if (!is_legal_mode(hart.v, hart.priv, hart.c)) return false;
  const bool conf_active = hart.active.kind == HartActivation::Kind::TvmContext;
  return (hart.c == 1) == conf_active;
}

IntFileAccessResult interrupt_file_access(Hart& hart, InterruptFile& file,
                                          AccessKind kind,
                                          uint64_t store_value) {
  if (hart.c == 0) {
    return {Exception::of(hart.v == 0 ? ExceptionKind::IllegalInstruction
                                      : ExceptionKind::VirtualInstruction),
            0};
  }
  const bool owns = file.bound_to.has_value() &&
                    hart.active.kind == HartActivation::Kind::TvmContext &&
                    file.bound_to->first == hart.active.tvm;
  if (!owns) {
    return {Exception::fault(ExceptionKind::AccessFault, file.backing_page), 0};
  }
  if (kind == AccessKind::Store) {
    file.pending.clear();
    for (uint32_t irq = 1; irq <= kMaxIrq; ++irq) {
      if (store_value & (uint64_t{1} << irq)) file.pending.insert(irq);
    }
    return {std::nullopt, 0};
  }
  return {std::nullopt, file.pending_mask()};
}

InjectStatus inject_interrupt(InterruptFile& file, uint32_t irq) {
  if (irq == 0 || irq > kMaxIrq) return InjectStatus::InvalidIrq;
  if (!file.bound_to.has_value()) return InjectStatus::Unbound;
  file.pending.insert(irq);
  return InjectStatus::Ok;
}

}  // namespace cove
