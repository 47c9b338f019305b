#pragma once

#include <cstdint>
#include <limits>

namespace rangemode::detail {

// Flat complete-binary-tree overlays over fixed-width rows. Layout per row:
// t[1] root, leaves at t[pow2 + slot]; t[0] unused.

inline int overlay_pow2(int slots) {
  int p = 1;
  while (p < slots) p <<= 1;
  return p;
}

// --- nonzero-count overlay (int32): internal nodes hold the number of
// nonzero leaves below them.

inline void nz_change(std::int32_t* t, int pow2, int slot, int delta) {
  int i = pow2 + slot;
  for (; i >= 1; i >>= 1) t[i] += delta;
}

// 1-based k-th nonzero leaf; -1 when fewer than k exist.
inline int nz_kth(const std::int32_t* t, int pow2, int k) {
  if (t[1] < k) return -1;
  int node = 1;
  while (node < pow2) {
    if (t[2 * node] >= k) {
      node = 2 * node;
    } else {
      k -= t[2 * node];
      node = 2 * node + 1;
    }
  }
  return node - pow2;
}

// --- min-value overlay (int64): internal nodes hold the min of leaves;
// argmin descends preferring the left child, so ties resolve to the
// smallest slot.

inline constexpr std::int64_t kOverlayInf = std::numeric_limits<std::int64_t>::max() / 4;

inline void min_set(std::int64_t* t, int pow2, int slot, std::int64_t value) {
  int i = pow2 + slot;
  t[i] = value;
  for (i >>= 1; i >= 1; i >>= 1) {
    std::int64_t m = t[2 * i] < t[2 * i + 1] ? t[2 * i] : t[2 * i + 1];
    if (t[i] == m) break;
    t[i] = m;
  }
}

// (min value, slot); value == kOverlayInf means the row is all masked/empty.
inline std::pair<std::int64_t, int> min_query(const std::int64_t* t, int pow2) {
  if (t[1] >= kOverlayInf) return {kOverlayInf, -1};
  int node = 1;
  while (node < pow2) {
    node = (t[2 * node] <= t[2 * node + 1]) ? 2 * node : 2 * node + 1;
  }
  return {t[node], node - pow2};
}

}  // namespace rangemode::detail
