#pragma once

#include <cstdint>
#include <unordered_map>

#include "rangemode/core/order_sequence.hpp"

namespace rangemode {

// Per-value trees of occurrence handles, ordered by current sequence rank.
// Relative rank order of live handles never changes, so the trees stay
// valid as the sequence shifts; comparisons go through rank() at use time.
class OccurrenceIndex {
 public:
  explicit OccurrenceIndex(const OrderSequence* seq) : seq_(seq) {}
  ~OccurrenceIndex();
  OccurrenceIndex(const OccurrenceIndex&) = delete;
  OccurrenceIndex& operator=(const OccurrenceIndex&) = delete;

  void insert(ElementHandle h);  // h must be alive in the sequence
  void erase(ElementHandle h);   // h must still be alive (erase before killing it)

  // Number of occurrences of `value` with rank in [lo, hi].
  std::int64_t count_in_range(std::uint32_t value, std::int64_t lo, std::int64_t hi) const;
  std::int64_t occurrence_count(std::uint32_t value) const;
  // 1-based position of h among its value's occurrences.
  std::int64_t occurrence_index(ElementHandle h) const;
  // 1-based idx-th occurrence of value.
  ElementHandle occurrence_at(std::uint32_t value, std::int64_t idx) const;

  std::uint64_t content_hash() const { return hash_.value(); }

  template <class Fn>  // fn(value, occurrence count)
  void for_each_value(Fn&& fn) const {
    for (const auto& [v, t] : trees_) fn(v, detail::avl_sz(t.root));
  }

 private:
  struct Node : detail::AvlLinks<Node> {
    ElementHandle handle = kNullHandle;
  };
  struct Tree {
    Node* root = nullptr;
  };

  Node* find_node(std::uint32_t value, ElementHandle h) const;

  const OrderSequence* seq_;
  std::unordered_map<std::uint32_t, Tree> trees_;
  XorAcc hash_;
};

}  // namespace rangemode
