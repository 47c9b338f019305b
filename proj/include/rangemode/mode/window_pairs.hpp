#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rangemode/core/occurrence_index.hpp"
#include "rangemode/core/pair_tree.hpp"

namespace rangemode::mode {

// For every value with occurrences o_1..o_t and every window size
// k <= max_window, tree k holds the pairs (o_x, o_{x+k-1}). A pair of tree k
// inside [l, r] proves some value occurs k times there, and the largest such
// k is exact whenever the true mode frequency fits under max_window. Each
// mutation re-stitches the O(k) pairs straddling the touched occurrence.
class WindowPairIndex {
 public:
  WindowPairIndex(const OrderSequence* seq, OccurrenceIndex* occ, int max_window);

  // h is already in the sequence but not yet indexed; takes over the
  // occurrence-index update so pair stitching sees a consistent order.
  void on_insert(ElementHandle h);
  // h still live and indexed; removes it from the occurrence index too.
  void on_erase(ElementHandle h);

  // Largest k with a pair inside [l, r], with the pair's start handle.
  std::optional<std::pair<ElementHandle, std::int64_t>> best_window(std::int64_t l, std::int64_t r) const;

  int max_window() const { return max_window_; }
  const PairTree& tree(int k) const { return *trees_[static_cast<size_t>(k - 1)]; }

  bool debug_validate() const;  // exact windowed-pair sets per value
  std::uint64_t content_hash() const;

 private:
  const OrderSequence* seq_;
  OccurrenceIndex* occ_;
  int max_window_;
  std::vector<std::unique_ptr<PairTree>> trees_;  // trees_[k-1] holds window k

  // occurrence handles around index x0, clamped; u[y - y_lo] = y-th occurrence
  std::vector<ElementHandle> neighborhood(std::uint32_t value, std::int64_t y_lo, std::int64_t y_hi) const;
};

}  // namespace rangemode::mode
