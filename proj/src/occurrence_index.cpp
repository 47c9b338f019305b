#include "rangemode/core/occurrence_index.hpp"

#include <stdexcept>

namespace rangemode {

namespace {
constexpr auto kNoPull = [](auto*) {};
}

OccurrenceIndex::~OccurrenceIndex() {
  for (auto& [v, t] : trees_) detail::avl_free_all(t.root);
}

void OccurrenceIndex::insert(ElementHandle h) {
  std::uint32_t value = seq_->value_of(h);
  std::int64_t r = seq_->rank(h);
  Node* n = new Node;
  n->handle = h;
  Tree& t = trees_[value];
  t.root = detail::avl_insert_ordered(
      t.root, n, [&](const Node* cur) { return r < seq_->rank(cur->handle); }, kNoPull);
  hash_.toggle(value, h);
}

OccurrenceIndex::Node* OccurrenceIndex::find_node(std::uint32_t value, ElementHandle h) const {
  auto it = trees_.find(value);
  if (it == trees_.end()) return nullptr;
  std::int64_t r = seq_->rank(h);
  Node* cur = it->second.root;
  while (cur) {
    std::int64_t rc = seq_->rank(cur->handle);
    if (r == rc) return cur;
    cur = r < rc ? cur->left : cur->right;
  }
  return nullptr;
}

void OccurrenceIndex::erase(ElementHandle h) {
  std::uint32_t value = seq_->value_of(h);
  Node* z = find_node(value, h);
  if (!z || z->handle != h) throw std::logic_error("OccurrenceIndex::erase: handle not indexed");
  Tree& t = trees_[value];
  auto [root, dead] = detail::avl_erase(
      t.root, z, kNoPull, [](Node* dst, Node* src) { dst->handle = src->handle; });
  t.root = root;
  delete dead;
  hash_.toggle(value, h);
  if (!t.root) trees_.erase(value);
}

std::int64_t OccurrenceIndex::count_in_range(std::uint32_t value, std::int64_t lo, std::int64_t hi) const {
  if (lo > hi) return 0;
  auto it = trees_.find(value);
  if (it == trees_.end()) return 0;
  // count of occurrences with rank <= bound
  auto count_le = [&](std::int64_t bound) {
    std::int64_t acc = 0;
    const Node* cur = it->second.root;
    while (cur) {
      if (seq_->rank(cur->handle) <= bound) {
        acc += detail::avl_sz(cur->left) + 1;
        cur = cur->right;
      } else {
        cur = cur->left;
      }
    }
    return acc;
  };
  return count_le(hi) - count_le(lo - 1);
}

std::int64_t OccurrenceIndex::occurrence_count(std::uint32_t value) const {
  auto it = trees_.find(value);
  return it == trees_.end() ? 0 : detail::avl_sz(it->second.root);
}

std::int64_t OccurrenceIndex::occurrence_index(ElementHandle h) const {
  Node* n = find_node(seq_->value_of(h), h);
  if (!n) throw std::logic_error("OccurrenceIndex::occurrence_index: handle not indexed");
  return detail::avl_index_of(n) + 1;
}

ElementHandle OccurrenceIndex::occurrence_at(std::uint32_t value, std::int64_t idx) const {
  auto it = trees_.find(value);
  Node* n = it == trees_.end() ? nullptr : detail::avl_select(it->second.root, idx - 1);
  if (!n) throw std::out_of_range("OccurrenceIndex::occurrence_at: index out of range");
  return n->handle;
}

}  // namespace rangemode
