#include "rangemode/harness/oracles.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace rangemode::harness {

std::pair<std::uint32_t, std::int64_t> oracle_mode(std::span<const std::uint32_t> seq, std::int64_t l,
                                                   std::int64_t r) {
  if (l < 1 || r > static_cast<std::int64_t>(seq.size()) || l > r)
    throw std::out_of_range("oracle_mode: range out of bounds");
  std::unordered_map<std::uint32_t, std::int64_t> cnt;
  for (std::int64_t p = l; p <= r; ++p) ++cnt[seq[static_cast<size_t>(p - 1)]];
  std::uint32_t best_v = 0;
  std::int64_t best_f = -1;
  for (const auto& [v, f] : cnt)
    if (f > best_f || (f == best_f && v < best_v)) {
      best_v = v;
      best_f = f;
    }
  return {best_v, best_f};
}

std::optional<std::pair<std::int64_t, int>> oracle_minplus(const minplus::Mat& a, const minplus::Mat& b,
                                                           int i, int j, std::span<const int> forbidden) {
  if (i < 0 || i >= a.rows || j < 0 || j >= b.cols)
    throw std::out_of_range("oracle_minplus: index out of range");
  std::vector<int> s(forbidden.begin(), forbidden.end());
  std::sort(s.begin(), s.end());
  minplus::Best best;
  for (int k = 0; k < a.cols; ++k) {
    if (std::binary_search(s.begin(), s.end(), k)) continue;
    std::int64_t av = a.at(i, k), bv = b.at(k, j);
    if (!minplus::finite(av) || !minplus::finite(bv)) continue;
    best.offer(av + bv, k);
  }
  if (!best.valid()) return std::nullopt;
  return std::make_pair(best.value, best.witness);
}

}  // namespace rangemode::harness
