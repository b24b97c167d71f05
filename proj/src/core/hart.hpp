// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <array>
#include <cassert>
#include <optional>
#include <set>

#include "core/types.hpp"

namespace cove {

/// RISC-V privilege levels; encoding 0b10 is reserved.
enum class PrivilegeLevel : uint8_t { U = 0b00, S = 0b01, M = 0b11 };

const char* to_string(PrivilegeLevel p);

struct Exception {
  ExceptionKind kind;
  std::optional<PageAddr> addr;  // present iff Access/GuestPage fault

  static Exception fault(ExceptionKind k, PageAddr a) { return {k, a}; }
  static Exception of(ExceptionKind k) { return {k, std::nullopt}; }
};

/// What the hart is currently running on behalf of.
struct HartActivation {
  enum class Kind : uint8_t { Host, TsmContext, TvmContext } kind = Kind::Host;
  TvmId tvm = 0;
  VcpuId vcpu = 0;
};

/// Snapshot of the host-visible register state taken at TEECALL.
struct SavedHostContext {
  std::array<uint64_t, kGprCount> gprs{};
  PrivilegeLevel priv = PrivilegeLevel::S;
  uint8_t v = 0;
};

/// One hardware thread: privilege level, virtualization bit V, confidential
/// qualifier C, and the integer register file (x0 hardwired to zero).
struct Hart {
  uint32_t hart_id = 0;
  PrivilegeLevel priv = PrivilegeLevel::S;
  uint8_t v = 0;
  uint8_t c = 0;
  std::array<uint64_t, kGprCount> gprs{};
  HartActivation active;
  std::optional<SavedHostContext> saved_host_ctx;

  void write_gpr(uint32_t idx, uint64_t value) {
    assert(idx < kGprCount);
    if (idx != 0) gprs[idx] = value;
  }
  uint64_t read_gpr(uint32_t idx) const {
    assert(idx < kGprCount);
    return gprs[idx];
  }
};

/// True iff (v, priv, c) is an architecturally legal mode tuple. The seven
/// legal rows: {U,S,M} with v=0,c=0 and {VU,VS} with v=1 at either C value.
/// C=1 with v=0 is not a row of the table; it is entered only transiently
/// while the hart runs TSM code on behalf of a TEECALL, which
/// is_legal_hart_state admits via the activation.
bool is_legal_mode(uint8_t v, PrivilegeLevel priv, uint8_t c);
bool is_legal_hart_state(const Hart& hart);

/// A guest interrupt file: one memory-resident page of pending-interrupt
/// state, bindable to exactly one (tvm, vcpu).
struct InterruptFile {
  uint64_t file_id = 0;
  PageAddr backing_page;
  std::optional<std::pair<TvmId, VcpuId>> bound_to;
  std::set<uint32_t> pending;  // interrupt identities 1..63

  uint64_t pending_mask() const {
    uint64_t m = 0;
    for (uint32_t irq : pending) m |= uint64_t{1} << irq;
    return m;
  }
};

inline constexpr uint32_t kMaxIrq = 63;

/// Register-file-style access to a TEE-bound interrupt file. Exception
/// selection is a pure function of (C, V, ownership): a non-confidential
/// hart gets IllegalInstruction (V=0) or VirtualInstruction (V=1); a
/// confidential hart may touch only the file bound to its own TVM.
struct IntFileAccessResult {
  std::optional<Exception> exc;
  uint64_t value = 0;  // pending mask on a permitted load
};

IntFileAccessResult interrupt_file_access(Hart& hart, InterruptFile& file,
                                          AccessKind kind, uint64_t store_value);

enum class InjectStatus : uint8_t { Ok, InvalidIrq, Unbound };

/// Queue an interrupt identity on a bound file; the owning vcpu observes it
/// at its next run entry. Delivery itself never exits the TVM.
InjectStatus inject_interrupt(InterruptFile& file, uint32_t irq);

}  // namespace cove
