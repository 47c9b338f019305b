#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rangemode/core/hashing.hpp"

namespace rangemode::minplus {

// Missing entries are a distinguished sentinel, never "a very large number":
// sums are only formed between finite entries, so arithmetic cannot overflow.
inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

inline bool finite(std::int64_t v) { return v < kInf; }

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> v;

  Mat() = default;
  Mat(int r, int c, std::int64_t fill = kInf) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

  std::int64_t& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  std::int64_t at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
  const std::int64_t* row(int r) const { return v.data() + static_cast<size_t>(r) * cols; }
  std::int64_t* row(int r) { return v.data() + static_cast<size_t>(r) * cols; }

  std::uint64_t content_hash() const {
    StreamHash h;
    h.put(static_cast<std::uint64_t>(rows));
    h.put(static_cast<std::uint64_t>(cols));
    for (std::int64_t x : v) h.put_i64(x);
    return h.value();
  }
};

// (value, witness) result of a min-plus query with a forbidden set.
struct Best {
  std::int64_t value = kInf;
  int witness = -1;

  bool valid() const { return witness >= 0; }

  // Tie-break toward the smallest witness.
  void offer(std::int64_t val, int k) {
    if (val < value || (val == value && (witness < 0 || k < witness))) {
      value = val;
      witness = k;
    }
  }
};

}  // namespace rangemode::minplus
