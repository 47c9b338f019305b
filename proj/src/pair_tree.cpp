#include "rangemode/core/pair_tree.hpp"

#include <stdexcept>

namespace rangemode {

PairTree::~PairTree() { detail::avl_free_all(root_); }

void PairTree::pull(Node* n) const {
  ElementHandle best = n->second;
  std::int64_t best_rank = seq_->rank(best);
  for (Node* c : {n->left, n->right}) {
    if (!c) continue;
    std::int64_t r = seq_->rank(c->min_second);
    if (r < best_rank) {
      best = c->min_second;
      best_rank = r;
    }
  }
  n->min_second = best;
}

void PairTree::insert(ElementHandle first, ElementHandle second) {
  std::int64_t rf = seq_->rank(first);
  if (seq_->rank(second) < rf) throw std::logic_error("PairTree::insert: second precedes first");
  Node* n = new Node;
  n->first = first;
  n->second = second;
  auto do_pull = [this](Node* m) { pull(m); };
  root_ = detail::avl_insert_ordered(
      root_, n, [&](const Node* cur) { return rf < seq_->rank(cur->first); }, do_pull);
  hash_.toggle(first, second);
}

void PairTree::erase(ElementHandle first) {
  std::int64_t rf = seq_->rank(first);
  Node* cur = root_;
  while (cur) {
    std::int64_t rc = seq_->rank(cur->first);
    if (rf == rc) break;
    cur = rf < rc ? cur->left : cur->right;
  }
  if (!cur || cur->first != first) throw std::logic_error("PairTree::erase: pair not present");
  hash_.toggle(cur->first, cur->second);
  auto do_pull = [this](Node* m) { pull(m); };
  auto [root, dead] = detail::avl_erase(root_, cur, do_pull, [](Node* dst, Node* src) {
    dst->first = src->first;
    dst->second = src->second;
  });
  root_ = root;
  delete dead;
}

// Any node in subtree n (all keys already >= lo) with rank(second) <= hi;
// leftmost such node by key.
const PairTree::Node* PairTree::descend_min_second(const Node* n, std::int64_t hi) const {
  if (!n || seq_->rank(n->min_second) > hi) return nullptr;
  for (;;) {
    if (n->left && seq_->rank(n->left->min_second) <= hi) {
      n = n->left;
    } else if (seq_->rank(n->second) <= hi) {
      return n;
    } else {
      n = n->right;  // must exist: subtree min is <= hi but self/left are not
    }
  }
}

const PairTree::Node* PairTree::find_rec(const Node* n, std::int64_t lo, std::int64_t hi) const {
  if (!n) return nullptr;
  if (seq_->rank(n->first) < lo) return find_rec(n->right, lo, hi);
  if (const Node* m = find_rec(n->left, lo, hi)) return m;
  if (seq_->rank(n->second) <= hi) return n;
  return descend_min_second(n->right, hi);
}

bool PairTree::exists_within(std::int64_t lo, std::int64_t hi) const {
  return find_rec(root_, lo, hi) != nullptr;
}

std::optional<PairTree::Pair> PairTree::find_within(std::int64_t lo, std::int64_t hi) const {
  const Node* n = find_rec(root_, lo, hi);
  if (!n) return std::nullopt;
  return Pair{n->first, n->second};
}

}  // namespace rangemode
