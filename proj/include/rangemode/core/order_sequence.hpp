#pragma once

#include <cstdint>
#include <vector>

#include "rangemode/detail/avl.hpp"
#include "rangemode/core/hashing.hpp"

namespace rangemode {

// Stable identifier for one element of the mutable sequence. Handles stay
// valid (and order-comparable through rank()) across unrelated insertions
// and deletions; they die only when their own element is erased.
using ElementHandle = std::uint32_t;
inline constexpr ElementHandle kNullHandle = static_cast<ElementHandle>(-1);

// Order-maintenance sequence: rank/select both 1-based, insert at position,
// erase by position or handle. Backed by an AVL keyed implicitly by
// position, with an indirection table so erase never invalidates other
// handles.
class OrderSequence {
 public:
  OrderSequence() = default;
  ~OrderSequence();
  OrderSequence(const OrderSequence&) = delete;
  OrderSequence& operator=(const OrderSequence&) = delete;

  // Insert before position pos (1 <= pos <= size()+1), returns the handle.
  ElementHandle insert(std::int64_t pos, std::uint32_t value);
  void erase(std::int64_t pos);
  void erase_handle(ElementHandle h);

  std::int64_t rank(ElementHandle h) const;         // 1-based; h must be alive
  ElementHandle select(std::int64_t pos) const;      // 1-based
  std::uint32_t value_of(ElementHandle h) const;     // valid also for dead handles
  bool alive(ElementHandle h) const;
  std::int64_t size() const { return root_ ? root_->size : 0; }

  // In-order handles of the current sequence.
  std::vector<ElementHandle> to_handles() const;
  std::vector<std::uint32_t> to_values() const;

  std::uint64_t content_hash() const { return hash_.value(); }

 private:
  struct Node : detail::AvlLinks<Node> {
    ElementHandle handle = kNullHandle;
  };
  struct Slot {
    Node* node = nullptr;
    std::uint32_t value = 0;
  };

  Node* root_ = nullptr;
  std::vector<Slot> slots_;
  XorAcc hash_;
};

}  // namespace rangemode
