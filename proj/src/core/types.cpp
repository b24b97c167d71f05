// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/types.hpp"

#include <unordered_map>

namespace cove {

namespace {

const std::unordered_map<AbiStatus, const char*>& status_names() {
  static const std::unordered_map<AbiStatus, const char*> names = {
      {AbiStatus::Ok, "ok"},
      {AbiStatus::NotBooted, "not_booted"},
      {AbiStatus::AlreadyBooted, "already_booted"},
      {AbiStatus::UnknownFunction, "unknown_function"},
      {AbiStatus::NotHostContext, "not_host_context"},
      {AbiStatus::NotTsmContext, "not_tsm_context"},
      {AbiStatus::InvalidAddress, "invalid_address"},
      {AbiStatus::OutOfBounds, "out_of_bounds"},
      {AbiStatus::AlreadyConfidential, "already_confidential"},
      {AbiStatus::NotConfidential, "not_confidential"},
      {AbiStatus::PageInUse, "page_in_use"},
      {AbiStatus::PageNotFree, "page_not_free"},
      {AbiStatus::TooFewPages, "too_few_pages"},
      {AbiStatus::TvmLimit, "tvm_limit"},
      {AbiStatus::UnknownTvm, "unknown_tvm"},
      {AbiStatus::WrongPhase, "wrong_phase"},
      {AbiStatus::Overlap, "overlap"},
      {AbiStatus::BadSource, "bad_source"},
      {AbiStatus::GpaUnmappedRegion, "gpa_unmapped_region"},
      {AbiStatus::GpaAlreadyMapped, "gpa_already_mapped"},
      {AbiStatus::GpaNotShared, "gpa_not_shared"},
      {AbiStatus::SourceConfidential, "source_confidential"},
      {AbiStatus::OutOfTablePages, "out_of_table_pages"},
      {AbiStatus::NoVcpus, "no_vcpus"},
      {AbiStatus::DuplicateVcpu, "duplicate_vcpu"},
      {AbiStatus::UnknownVcpu, "unknown_vcpu"},
      {AbiStatus::AlreadyBound, "already_bound"},
      {AbiStatus::Unbound, "unbound"},
      {AbiStatus::InvalidIrq, "invalid_irq"},
  };
  return names;
}

}  // namespace

const char* to_string(AbiStatus s) {
  auto it = status_names().find(s);
  return it != status_names().end() ? it->second : "unknown_status";
}

std::optional<AbiStatus> abi_status_from_string(const std::string& name) {
  for (const auto& [code, str] : status_names()) {
    if (name == str) return code;
  }
  return std::nullopt;
}

const char* to_string(PageUse u) {
  switch (u) {
    case PageUse::TvmData: return "tvm_data";
    case PageUse::TvmState: return "tvm_state";
    case PageUse::VcpuState: return "vcpu_state";
    case PageUse::GStageTable: return "gstage_table";
    case PageUse::InterruptFile: return "interrupt_file";
    case PageUse::TsmInternal: return "tsm_internal";
  }
  return "?";
}

const char* to_string(AccessKind k) {
  switch (k) {
    case AccessKind::Load: return "load";
    case AccessKind::Store: return "store";
    case AccessKind::Fetch: return "fetch";
    case AccessKind::PageWalk: return "page_walk";
  }
  return "?";
}

const char* to_string(FaultKind f) {
  switch (f) {
    case FaultKind::AccessFault: return "access_fault";
    case FaultKind::GuestPageFault: return "guest_page_fault";
  }
  return "?";
}

const char* to_string(ExceptionKind e) {
  switch (e) {
    case ExceptionKind::IllegalInstruction: return "illegal_instruction";
    case ExceptionKind::VirtualInstruction: return "virtual_instruction";
    case ExceptionKind::AccessFault: return "access_fault";
    case ExceptionKind::GuestPageFault: return "guest_page_fault";
    case ExceptionKind::EcallFromVS: return "ecall_from_vs";
    case ExceptionKind::EcallFromHS: return "ecall_from_hs";
  }
  return "?";
}

std::optional<FaultKind> fault_kind_from_string(const std::string& name) {
  if (name == "access_fault" || name == "access") return FaultKind::AccessFault;
  if (name == "guest_page_fault" || name == "guest_page")
    return FaultKind::GuestPageFault;
  return std::nullopt;
}

std::optional<ExceptionKind> exception_kind_from_string(
    const std::string& name) {
  if (name == "illegal_instruction") return ExceptionKind::IllegalInstruction;
  if (name == "virtual_instruction") return ExceptionKind::VirtualInstruction;
  if (name == "access_fault" || name == "access")
    return ExceptionKind::AccessFault;
  if (name == "guest_page_fault" || name == "guest_page")
    return ExceptionKind::GuestPageFault;
  if (name == "ecall_from_vs") return ExceptionKind::EcallFromVS;
  if (name == "ecall_from_hs") return ExceptionKind::EcallFromHS;
  return std::nullopt;
}

}  // namespace cove
