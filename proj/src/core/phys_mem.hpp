// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#pragma once

#include <cassert>
#include <cstring>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace cove {

/// Flat simulated physical memory, one byte array per platform instance.
/// Bounds are the caller's responsibility; every accessor asserts them.
class PhysicalMemory {
 public:
  explicit PhysicalMemory(uint64_t page_count)
      : page_count_(page_count), bytes_(page_count * kPageSize, 0) {}

  uint64_t page_count() const { return page_count_; }
  bool contains(PageAddr p) const { return p.num < page_count_; }

  std::span<uint8_t> page(PageAddr p) {
    assert(contains(p));
    return {bytes_.data() + p.byte_addr(), kPageSize};
  }
  std::span<const uint8_t> page(PageAddr p) const {
    assert(contains(p));
    return {bytes_.data() + p.byte_addr(), kPageSize};
  }

  uint64_t read_u64(uint64_t byte_addr) const {
    assert(byte_addr % 8 == 0 && byte_addr + 8 <= bytes_.size());
    uint64_t v;
    std::memcpy(&v, bytes_.data() + byte_addr, 8);
    return v;
  }

  void write_u64(uint64_t byte_addr, uint64_t value) {
    assert(byte_addr % 8 == 0 && byte_addr + 8 <= bytes_.size());
    std::memcpy(bytes_.data() + byte_addr, &value, 8);
  }

  void zero_page(PageAddr p) {
    auto s = page(p);
    std::memset(s.data(), 0, s.size());
  }

  bool page_is_zero(PageAddr p) const {
    for (uint8_t b : page(p)) {
      if (b != 0) return false;
    }
    return true;
  }

  void copy_page(PageAddr src, PageAddr dst) {
    assert(contains(src) && contains(dst));
    std::memcpy(bytes_.data() + dst.byte_addr(), bytes_.data() + src.byte_addr(),
                kPageSize);
  }

 private:
  uint64_t page_count_;
  std::vector<uint8_t> bytes_;
};

}  // namespace cove
