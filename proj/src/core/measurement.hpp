// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <vector>

#include "core/crypto.hpp"

namespace cove {

/// Order-sensitive measurement register. Starting from 32 zero bytes, every
/// record folds as d = H(d || LE64(gpa) || content_digest); the log keeps
/// each (gpa, content_digest) pair so the digest can be replayed and audited.
class MeasurementRegister {
 public:
  struct Record {
    uint64_t gpa;
    crypto::Digest content_digest;
  };

  const crypto::Digest& digest() const { return digest_; }
  const std::vector<Record>& log() const { return log_; }

  void extend(uint64_t gpa, const crypto::Digest& content_digest);

  /// Fold an arbitrary record list through the extend formula.
  static crypto::Digest replay(const std::vector<Record>& log);

 private:
  crypto::Digest digest_{};  // zero-initialized
  std::vector<Record> log_;
};

}  // namespace cove
