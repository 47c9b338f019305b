#pragma once

#include <cstdint>
#include <optional>

#include "rangemode/core/order_sequence.hpp"

namespace rangemode {

// Ordered collection of handle pairs (first, second), keyed by the current
// rank of `first` (firsts are distinct elements, so keys are unique). Every
// subtree is augmented with the pair whose `second` has the smallest rank,
// which makes "is there a pair with rank(first) >= lo and rank(second) <= hi"
// decidable by descent. The augmented entry is a handle, not a number, so it
// survives rank shifts: relative order of live handles never changes.
class PairTree {
 public:
  explicit PairTree(const OrderSequence* seq) : seq_(seq) {}
  ~PairTree();
  PairTree(const PairTree&) = delete;
  PairTree& operator=(const PairTree&) = delete;

  struct Pair {
    ElementHandle first;
    ElementHandle second;
  };

  void insert(ElementHandle first, ElementHandle second);
  void erase(ElementHandle first);  // by key

  // True iff a stored pair satisfies lo <= rank(first) and rank(second) <= hi.
  bool exists_within(std::int64_t lo, std::int64_t hi) const;
  // Same predicate; returns the qualifying pair with the smallest rank(first).
  std::optional<Pair> find_within(std::int64_t lo, std::int64_t hi) const;

  std::int64_t size() const { return root_ ? root_->size : 0; }
  std::uint64_t content_hash() const { return hash_.value(); }

  template <class Fn>  // fn(first, second), in key order
  void for_each(Fn&& fn) const {
    detail::avl_for_each(root_, [&](const Node* n) { fn(n->first, n->second); });
  }

 private:
  struct Node : detail::AvlLinks<Node> {
    ElementHandle first = kNullHandle;
    ElementHandle second = kNullHandle;
    ElementHandle min_second = kNullHandle;  // subtree argmin of rank(second)
  };

  void pull(Node* n) const;
  const Node* find_rec(const Node* n, std::int64_t lo, std::int64_t hi) const;
  const Node* descend_min_second(const Node* n, std::int64_t hi) const;

  const OrderSequence* seq_;
  Node* root_ = nullptr;
  XorAcc hash_;
};

}  // namespace rangemode
