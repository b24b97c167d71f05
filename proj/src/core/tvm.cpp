// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/tvm.hpp"

namespace cove {

const char* to_string(TvmPhase p) {
  switch (p) {
    case TvmPhase::Initializing: return "initializing";
    case TvmPhase::Runnable: return "runnable";
    case TvmPhase::Destroyed: return "destroyed";
  }
  return "?";
}

const char* to_string(GStageMapping::Kind k) {
  switch (k) {
    case GStageMapping::Kind::Measured: return "measured";
    case GStageMapping::Kind::Zero: return "zero";
    case GStageMapping::Kind::Shared: return "shared";
  }
  return "?";
}

const char* to_string(TvmExit::Reason r) {
  switch (r) {
    case TvmExit::Reason::GuestPageFault: return "guest_page_fault";
    case TvmExit::Reason::GuestRequest: return "guest_request";
    case TvmExit::Reason::Wfi: return "wfi";
    case TvmExit::Reason::Halted: return "halted";
    case TvmExit::Reason::InterruptPending: return "interrupt_pending";
  }
  return "?";
}

std::vector<uint8_t> encode_vcpu_program(VcpuId vcpu_id,
                                         const TvmProgram& program) {
  std::vector<uint8_t> buf;
  auto put_u64 = [&buf](uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
  };
  buf.insert(buf.end(), {'V', 'C', 'P', 'U'});
  put_u64(vcpu_id);
  put_u64(program.size());
  for (const Action& a : program) {
    buf.push_back(static_cast<uint8_t>(a.kind));
    buf.push_back(static_cast<uint8_t>(a.access));
    put_u64(a.gpa);
    put_u64(a.value);
    put_u64(a.covg_fn);
    put_u64(a.covg_args[0]);
    put_u64(a.covg_args[1]);
    buf.insert(buf.end(), a.report_data.begin(), a.report_data.end());
  }
  return buf;
}

}  // namespace cove
