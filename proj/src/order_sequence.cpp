#include "rangemode/core/order_sequence.hpp"

#include <stdexcept>

namespace rangemode {

namespace {
constexpr auto kNoPull = [](auto*) {};
}

OrderSequence::~OrderSequence() { detail::avl_free_all(root_); }

ElementHandle OrderSequence::insert(std::int64_t pos, std::uint32_t value) {
  if (pos < 1 || pos > size() + 1) throw std::out_of_range("OrderSequence::insert: position out of range");
  auto h = static_cast<ElementHandle>(slots_.size());
  slots_.push_back(Slot{nullptr, value});
  Node* n = new Node;
  n->handle = h;
  root_ = detail::avl_insert_at(root_, pos - 1, n, kNoPull);
  slots_[h].node = n;
  hash_.toggle(h, value);
  return h;
}

void OrderSequence::erase(std::int64_t pos) {
  if (pos < 1 || pos > size()) throw std::out_of_range("OrderSequence::erase: position out of range");
  erase_handle(detail::avl_select(root_, pos - 1)->handle);
}

void OrderSequence::erase_handle(ElementHandle h) {
  if (!alive(h)) throw std::out_of_range("OrderSequence::erase_handle: dead or invalid handle");
  Node* z = slots_[h].node;
  hash_.toggle(h, slots_[h].value);
  slots_[h].node = nullptr;  // kill first: the payload move below may re-point another slot
  auto moved = [this](Node* dst, Node* src) {
    dst->handle = src->handle;
    slots_[src->handle].node = dst;
  };
  auto [root, dead] = detail::avl_erase(root_, z, kNoPull, moved);
  root_ = root;
  delete dead;
}

std::int64_t OrderSequence::rank(ElementHandle h) const {
  if (!alive(h)) throw std::out_of_range("OrderSequence::rank: dead or invalid handle");
  return detail::avl_index_of(slots_[h].node) + 1;
}

ElementHandle OrderSequence::select(std::int64_t pos) const {
  if (pos < 1 || pos > size()) throw std::out_of_range("OrderSequence::select: position out of range");
  return detail::avl_select(root_, pos - 1)->handle;
}

std::uint32_t OrderSequence::value_of(ElementHandle h) const {
  if (h >= slots_.size()) throw std::out_of_range("OrderSequence::value_of: invalid handle");
  return slots_[h].value;
}

bool OrderSequence::alive(ElementHandle h) const { return h < slots_.size() && slots_[h].node != nullptr; }

std::vector<ElementHandle> OrderSequence::to_handles() const {
  std::vector<ElementHandle> out;
  out.reserve(static_cast<size_t>(size()));
  detail::avl_for_each(root_, [&](const Node* n) { out.push_back(n->handle); });
  return out;
}

std::vector<std::uint32_t> OrderSequence::to_values() const {
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<size_t>(size()));
  detail::avl_for_each(root_, [&](const Node* n) { out.push_back(slots_[n->handle].value); });
  return out;
}

}  // namespace rangemode
