#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rangemode/core/hashing.hpp"

namespace rangemode {

// Dense multiplicity histogram over a fixed domain with an overlay for
// earliest-nonzero queries, plus an undo journal: all add() calls since the
// last checkpoint can be rolled back to a bit-identical state.
class CountTree {
 public:
  explicit CountTree(int domain);

  int domain() const { return domain_; }
  void add(int slot, std::int64_t delta);
  std::int64_t count(int slot) const;

  std::optional<int> first_nonzero() const;
  // Up to two smallest nonzero slots, increasing.
  std::pair<std::optional<int>, std::optional<int>> first_two_nonzero() const;

  void checkpoint();  // accept current state as the rollback baseline
  void rollback();    // restore to the last checkpoint

  std::uint64_t checksum() const { return hash_.value(); }
  std::uint64_t checksum_recompute() const;

 private:
  int domain_;
  int pow2_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int32_t> nz_;  // nonzero-count overlay
  std::vector<std::pair<int, std::int64_t>> journal_;
  XorAcc hash_;
};

}  // namespace rangemode
