// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "core/measurement.hpp"

namespace cove {

namespace {

crypto::Digest fold(const crypto::Digest& prev, uint64_t gpa,
                    const crypto::Digest& content_digest) {
  std::vector<uint8_t> buf;
  buf.reserve(32 + 8 + 32);
  buf.insert(buf.end(), prev.begin(), prev.end());
  for (int i = 0; i < 8; ++i) {
    buf.push_back(static_cast<uint8_t>(gpa >> (8 * i)));
  }
  buf.insert(buf.end(), content_digest.begin(), content_digest.end());
  return crypto::sha256(buf);
}

}  // namespace

void MeasurementRegister::extend(uint64_t gpa,
                                 const crypto::Digest& content_digest) {
  digest_ = fold(digest_, gpa, content_digest);
  log_.push_back({gpa, content_digest});
}

crypto::Digest MeasurementRegister::replay(const std::vector<Record>& log) {
  crypto::Digest d{};
  for (const Record& r : log) {
    d = fold(d, r.gpa, r.content_digest);
  }
  return d;
}

}  // namespace cove
