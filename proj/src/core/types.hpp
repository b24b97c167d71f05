// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace cove {

inline constexpr uint64_t kPageSize = 4096;
inline constexpr uint64_t kPageShift = 12;
inline constexpr uint32_t kGprCount = 32;

inline constexpr uint64_t kTsmVersion = 1;
inline constexpr uint64_t kDefaultMaxTvms = 16;
inline constexpr uint64_t kMinTvmStatePages = 1;
inline constexpr uint64_t kMappingsPerTablePage = 512;

// Gpa values at or above this marker are reserved for synthetic measurement
// records (vcpu extends); tvm_add_memory_region rejects regions reaching it.
inline constexpr uint64_t kSyntheticGpaBase = 0xFFFF'FFFF'0000'0000ull;

using TvmId = uint64_t;
using VcpuId = uint64_t;

/// Physical page number (byte address / 4096). All ABI-visible physical
/// addresses are page-aligned byte addresses; this is their page index.
struct PageAddr {
  uint64_t num = 0;

  constexpr PageAddr() = default;
  constexpr explicit PageAddr(uint64_t n) : num(n) {}
  static constexpr PageAddr from_byte_addr(uint64_t addr) {
    return PageAddr{addr >> kPageShift};
  }
  constexpr uint64_t byte_addr() const { return num << kPageShift; }
  auto operator<=>(const PageAddr&) const = default;
};

/// What an assigned confidential page is used for.
enum class PageUse : uint8_t {
  TvmData,
  TvmState,
  VcpuState,
  GStageTable,
  InterruptFile,
  TsmInternal,
};

/// Owner of a ConfidentialAssigned page: the TSM itself or one TVM.
struct PageOwner {
  bool is_tsm = false;
  TvmId tvm = 0;

  static constexpr PageOwner tsm() { return PageOwner{true, 0}; }
  static constexpr PageOwner of_tvm(TvmId id) { return PageOwner{false, id}; }
  auto operator<=>(const PageOwner&) const = default;
};

enum class AccessKind : uint8_t { Load, Store, Fetch, PageWalk };

enum class FaultKind : uint8_t { AccessFault, GuestPageFault };

enum class ExceptionKind : uint8_t {
  IllegalInstruction,
  VirtualInstruction,
  AccessFault,
  GuestPageFault,
  EcallFromVS,
  EcallFromHS,
};

/// Flat status codes returned in a0 by every ABI function. Stable values,
/// stable names; the scenario DSL and trace records use the snake_case form.
enum class AbiStatus : uint64_t {
  Ok = 0,
  NotBooted,
  AlreadyBooted,
  UnknownFunction,
  NotHostContext,
  NotTsmContext,
  InvalidAddress,
  OutOfBounds,
  AlreadyConfidential,
  NotConfidential,
  PageInUse,
  PageNotFree,
  TooFewPages,
  TvmLimit,
  UnknownTvm,
  WrongPhase,
  Overlap,
  BadSource,
  GpaUnmappedRegion,
  GpaAlreadyMapped,
  GpaNotShared,
  SourceConfidential,
  OutOfTablePages,
  NoVcpus,
  DuplicateVcpu,
  UnknownVcpu,
  AlreadyBound,
  Unbound,
  InvalidIrq,
};

const char* to_string(AbiStatus s);
std::optional<AbiStatus> abi_status_from_string(const std::string& name);

const char* to_string(PageUse u);
const char* to_string(AccessKind k);
const char* to_string(FaultKind f);
const char* to_string(ExceptionKind e);
std::optional<FaultKind> fault_kind_from_string(const std::string& name);
std::optional<ExceptionKind> exception_kind_from_string(const std::string& name);

// COVH function ids, in lifecycle order. 0x0C (reassign) maps free
// confidential memory into a TVM; it shares the add_zero_pages handler.
inline constexpr uint64_t kCovhTsmInfo = 0x00;
inline constexpr uint64_t kCovhConvertPages = 0x01;
inline constexpr uint64_t kCovhTvmCreate = 0x02;
inline constexpr uint64_t kCovhAddPageTablePages = 0x03;
inline constexpr uint64_t kCovhAddMemoryRegion = 0x04;
inline constexpr uint64_t kCovhAddMeasuredPages = 0x05;
inline constexpr uint64_t kCovhCreateVcpu = 0x06;
inline constexpr uint64_t kCovhFinalize = 0x07;
inline constexpr uint64_t kCovhRun = 0x08;
inline constexpr uint64_t kCovhAddZeroPages = 0x09;
inline constexpr uint64_t kCovhAddSharedPages = 0x0A;
inline constexpr uint64_t kCovhDestroy = 0x0B;
inline constexpr uint64_t kCovhReassignPages = 0x0C;
inline constexpr uint64_t kCovhReclaimPages = 0x0D;

// COVG (guest-facing) and COVI (interrupt) function ids.
inline constexpr uint64_t kCovgGetEvidence = 0x100;
inline constexpr uint64_t kCovgShare = 0x101;
inline constexpr uint64_t kCovgUnshare = 0x102;
inline constexpr uint64_t kCoviBindInterruptFile = 0x200;

// Capability bits reported by tsm_info.
inline constexpr uint64_t kCapCovh = 1u << 0;
inline constexpr uint64_t kCapCovg = 1u << 1;
inline constexpr uint64_t kCapCovi = 1u << 2;

}  // namespace cove
