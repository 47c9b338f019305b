#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>

namespace rangemode::detail {

// Intrusive AVL with parent pointers and subtree sizes. Nodes embed
// AvlLinks<Node>. A Pull functor refreshes per-node augmentation; it runs
// after height/size are updated, bottom-up along every touched path, so
// augmented values are always consistent on return.

template <class Node>
struct AvlLinks {
  Node* parent = nullptr;
  Node* left = nullptr;
  Node* right = nullptr;
  int height = 1;
  std::int64_t size = 1;
};

template <class Node>
inline int avl_h(const Node* n) {
  return n ? n->height : 0;
}

template <class Node>
inline std::int64_t avl_sz(const Node* n) {
  return n ? n->size : 0;
}

template <class Node, class Pull>
inline void avl_refresh(Node* n, Pull&& pull) {
  n->height = 1 + std::max(avl_h(n->left), avl_h(n->right));
  n->size = 1 + avl_sz(n->left) + avl_sz(n->right);
  pull(n);
}

template <class Node, class Pull>
Node* avl_rotate_left(Node* x, Pull&& pull) {
  Node* y = x->right;
  x->right = y->left;
  if (y->left) y->left->parent = x;
  y->parent = x->parent;
  if (x->parent) {
    if (x->parent->left == x)
      x->parent->left = y;
    else
      x->parent->right = y;
  }
  y->left = x;
  x->parent = y;
  avl_refresh(x, pull);
  avl_refresh(y, pull);
  return y;
}

template <class Node, class Pull>
Node* avl_rotate_right(Node* x, Pull&& pull) {
  Node* y = x->left;
  x->left = y->right;
  if (y->right) y->right->parent = x;
  y->parent = x->parent;
  if (x->parent) {
    if (x->parent->left == x)
      x->parent->left = y;
    else
      x->parent->right = y;
  }
  y->right = x;
  x->parent = y;
  avl_refresh(x, pull);
  avl_refresh(y, pull);
  return y;
}

// Refresh and rebalance every node from `n` to the root; returns the root.
template <class Node, class Pull>
Node* avl_fix_upward(Node* root, Node* n, Pull&& pull) {
  while (n) {
    avl_refresh(n, pull);
    int bf = avl_h(n->left) - avl_h(n->right);
    if (bf > 1) {
      if (avl_h(n->left->left) < avl_h(n->left->right)) avl_rotate_left(n->left, pull);
      n = avl_rotate_right(n, pull);
    } else if (bf < -1) {
      if (avl_h(n->right->right) < avl_h(n->right->left)) avl_rotate_right(n->right, pull);
      n = avl_rotate_left(n, pull);
    }
    if (!n->parent) root = n;
    n = n->parent;
  }
  return root;
}

// Insert before 0-based position `pos` (pos in [0, size]).
template <class Node, class Pull>
Node* avl_insert_at(Node* root, std::int64_t pos, Node* nn, Pull&& pull) {
  nn->parent = nn->left = nn->right = nullptr;
  nn->height = 1;
  nn->size = 1;
  pull(nn);
  if (!root) return nn;
  Node* cur = root;
  for (;;) {
    std::int64_t ls = avl_sz(cur->left);
    if (pos <= ls) {
      if (!cur->left) {
        cur->left = nn;
        nn->parent = cur;
        break;
      }
      cur = cur->left;
    } else {
      pos -= ls + 1;
      if (!cur->right) {
        cur->right = nn;
        nn->parent = cur;
        break;
      }
      cur = cur->right;
    }
  }
  return avl_fix_upward(root, cur, pull);
}

// Insert by comparator descent. go_left(cur) decides whether nn belongs in
// cur's left subtree.
template <class Node, class Pull, class GoLeft>
Node* avl_insert_ordered(Node* root, Node* nn, GoLeft&& go_left, Pull&& pull) {
  nn->parent = nn->left = nn->right = nullptr;
  nn->height = 1;
  nn->size = 1;
  pull(nn);
  if (!root) return nn;
  Node* cur = root;
  for (;;) {
    if (go_left(cur)) {
      if (!cur->left) {
        cur->left = nn;
        nn->parent = cur;
        break;
      }
      cur = cur->left;
    } else {
      if (!cur->right) {
        cur->right = nn;
        nn->parent = cur;
        break;
      }
      cur = cur->right;
    }
  }
  return avl_fix_upward(root, cur, pull);
}

// Unlink `z`. With two children the successor's payload is moved into `z`
// via move_payload(dst, src) and the successor node is removed instead, so
// external structures that track payload location can re-point in O(1).
// Returns {new root, node to free}.
template <class Node, class Pull, class MovePayload>
std::pair<Node*, Node*> avl_erase(Node* root, Node* z, Pull&& pull, MovePayload&& move_payload) {
  if (z->left && z->right) {
    Node* s = z->right;
    while (s->left) s = s->left;
    move_payload(z, s);
    z = s;
  }
  Node* child = z->left ? z->left : z->right;
  Node* p = z->parent;
  if (child) child->parent = p;
  if (!p) {
    root = child;
  } else {
    if (p->left == z)
      p->left = child;
    else
      p->right = child;
    root = avl_fix_upward(root, p, pull);
  }
  z->parent = z->left = z->right = nullptr;
  return {root, z};
}

template <class Node>
Node* avl_select(Node* root, std::int64_t idx) {  // 0-based
  Node* cur = root;
  while (cur) {
    std::int64_t ls = avl_sz(cur->left);
    if (idx < ls) {
      cur = cur->left;
    } else if (idx == ls) {
      return cur;
    } else {
      idx -= ls + 1;
      cur = cur->right;
    }
  }
  return nullptr;
}

template <class Node>
std::int64_t avl_index_of(const Node* n) {  // 0-based
  std::int64_t idx = avl_sz(n->left);
  while (n->parent) {
    if (n == n->parent->right) idx += avl_sz(n->parent->left) + 1;
    n = n->parent;
  }
  return idx;
}

template <class Node, class Fn>
void avl_for_each(Node* n, Fn&& fn) {
  if (!n) return;
  avl_for_each(n->left, fn);
  fn(n);
  avl_for_each(n->right, fn);
}

template <class Node>
void avl_free_all(Node* n) {
  if (!n) return;
  avl_free_all(n->left);
  avl_free_all(n->right);
  delete n;
}

}  // namespace rangemode::detail
