#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rangemode/harness/oracles.hpp"

namespace rangemode::harness {

// Reference implementation: plain dynamic array, queries by full recount.
class NaiveMode {
 public:
  void insert(std::int64_t pos, std::uint32_t value) {
    if (pos < 1 || pos > static_cast<std::int64_t>(seq_.size()) + 1)
      throw std::out_of_range("NaiveMode::insert: position out of range");
    seq_.insert(seq_.begin() + (pos - 1), value);
  }
  void erase(std::int64_t pos) {
    if (pos < 1 || pos > static_cast<std::int64_t>(seq_.size()))
      throw std::out_of_range("NaiveMode::erase: position out of range");
    seq_.erase(seq_.begin() + (pos - 1));
  }
  std::pair<std::uint32_t, std::int64_t> query(std::int64_t l, std::int64_t r) const {
    return oracle_mode(seq_, l, r);
  }
  std::int64_t count_in_range(std::uint32_t value, std::int64_t l, std::int64_t r) const {
    std::int64_t cnt = 0;
    for (std::int64_t p = l; p <= r; ++p)
      if (seq_[static_cast<size_t>(p - 1)] == value) ++cnt;
    return cnt;
  }
  std::int64_t size() const { return static_cast<std::int64_t>(seq_.size()); }
  const std::vector<std::uint32_t>& data() const { return seq_; }

 private:
  std::vector<std::uint32_t> seq_;
};

}  // namespace rangemode::harness
