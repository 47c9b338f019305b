#include "rangemode/mode/window_pairs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace rangemode::mode {

WindowPairIndex::WindowPairIndex(const OrderSequence* seq, OccurrenceIndex* occ, int max_window)
    : seq_(seq), occ_(occ), max_window_(max_window) {
  if (max_window < 1) throw std::invalid_argument("WindowPairIndex: max_window must be >= 1");
  trees_.reserve(static_cast<size_t>(max_window));
  for (int k = 0; k < max_window; ++k) trees_.push_back(std::make_unique<PairTree>(seq));
}

std::vector<ElementHandle> WindowPairIndex::neighborhood(std::uint32_t value, std::int64_t y_lo,
                                                         std::int64_t y_hi) const {
  std::vector<ElementHandle> out;
  out.reserve(static_cast<size_t>(std::max<std::int64_t>(0, y_hi - y_lo + 1)));
  for (std::int64_t y = y_lo; y <= y_hi; ++y) out.push_back(occ_->occurrence_at(value, y));
  return out;
}

void WindowPairIndex::on_insert(ElementHandle h) {
  std::uint32_t value = seq_->value_of(h);
  std::int64_t r = seq_->rank(h);
  std::int64_t t_old = occ_->occurrence_count(value);
  std::int64_t x0 = occ_->count_in_range(value, 1, r - 1) + 1;  // h's slot after insertion

  std::int64_t y_lo = std::max<std::int64_t>(1, x0 - max_window_ + 1);
  std::int64_t y_hi = std::min<std::int64_t>(t_old, x0 + max_window_ - 2);
  std::vector<ElementHandle> u = neighborhood(value, y_lo, y_hi);
  auto old_at = [&](std::int64_t y) { return u[static_cast<size_t>(y - y_lo)]; };

  // Windows that straddled the insertion slot are re-stitched.
  for (std::int64_t k = 2; k <= max_window_; ++k) {
    std::int64_t x_lo = std::max<std::int64_t>(1, x0 - k + 1);
    std::int64_t x_hi = std::min(x0 - 1, t_old - k + 1);
    for (std::int64_t x = x_lo; x <= x_hi; ++x) trees_[static_cast<size_t>(k - 1)]->erase(old_at(x));
  }

  occ_->insert(h);
  std::int64_t t_new = t_old + 1;
  auto new_at = [&](std::int64_t y) { return y < x0 ? old_at(y) : (y == x0 ? h : old_at(y - 1)); };
  for (std::int64_t k = 1; k <= max_window_; ++k) {
    std::int64_t x_lo = std::max<std::int64_t>(1, x0 - k + 1);
    std::int64_t x_hi = std::min(x0, t_new - k + 1);
    for (std::int64_t x = x_lo; x <= x_hi; ++x)
      trees_[static_cast<size_t>(k - 1)]->insert(new_at(x), new_at(x + k - 1));
  }
}

void WindowPairIndex::on_erase(ElementHandle h) {
  std::uint32_t value = seq_->value_of(h);
  std::int64_t t_old = occ_->occurrence_count(value);
  std::int64_t x0 = occ_->occurrence_index(h);

  std::int64_t y_lo = std::max<std::int64_t>(1, x0 - max_window_ + 1);
  std::int64_t y_hi = std::min<std::int64_t>(t_old, x0 + max_window_ - 1);
  std::vector<ElementHandle> u = neighborhood(value, y_lo, y_hi);
  auto old_at = [&](std::int64_t y) { return u[static_cast<size_t>(y - y_lo)]; };

  for (std::int64_t k = 1; k <= max_window_; ++k) {
    std::int64_t x_lo = std::max<std::int64_t>(1, x0 - k + 1);
    std::int64_t x_hi = std::min(x0, t_old - k + 1);
    for (std::int64_t x = x_lo; x <= x_hi; ++x) trees_[static_cast<size_t>(k - 1)]->erase(old_at(x));
  }

  occ_->erase(h);
  std::int64_t t_new = t_old - 1;
  auto new_at = [&](std::int64_t y) { return y < x0 ? old_at(y) : old_at(y + 1); };
  for (std::int64_t k = 2; k <= max_window_; ++k) {
    std::int64_t x_lo = std::max<std::int64_t>(1, x0 - k + 1);
    std::int64_t x_hi = std::min(x0 - 1, t_new - k + 1);
    for (std::int64_t x = x_lo; x <= x_hi; ++x)
      trees_[static_cast<size_t>(k - 1)]->insert(new_at(x), new_at(x + k - 1));
  }
}

std::optional<std::pair<ElementHandle, std::int64_t>> WindowPairIndex::best_window(std::int64_t l,
                                                                                   std::int64_t r) const {
  if (!trees_[0]->exists_within(l, r)) return std::nullopt;
  // A pair of window k implies one of window k-1, so existence is monotone.
  std::int64_t lo = 1, hi = max_window_;
  while (lo < hi) {
    std::int64_t mid = (lo + hi + 1) / 2;
    if (trees_[static_cast<size_t>(mid - 1)]->exists_within(l, r))
      lo = mid;
    else
      hi = mid - 1;
  }
  auto p = trees_[static_cast<size_t>(lo - 1)]->find_within(l, r);
  return std::make_pair(p->first, lo);
}

bool WindowPairIndex::debug_validate() const {
  // Expected pair sets, rebuilt from scratch.
  std::vector<std::set<std::pair<ElementHandle, ElementHandle>>> expect(
      static_cast<size_t>(max_window_));
  bool ok = true;
  occ_->for_each_value([&](std::uint32_t v, std::int64_t t) {
    for (std::int64_t k = 1; k <= std::min<std::int64_t>(max_window_, t); ++k)
      for (std::int64_t x = 1; x + k - 1 <= t; ++x)
        expect[static_cast<size_t>(k - 1)].insert(
            {occ_->occurrence_at(v, x), occ_->occurrence_at(v, x + k - 1)});
  });
  for (int k = 1; k <= max_window_; ++k) {
    std::set<std::pair<ElementHandle, ElementHandle>> got;
    trees_[static_cast<size_t>(k - 1)]->for_each(
        [&](ElementHandle f, ElementHandle s) { got.insert({f, s}); });
    if (got != expect[static_cast<size_t>(k - 1)]) ok = false;
  }
  return ok;
}

std::uint64_t WindowPairIndex::content_hash() const {
  std::uint64_t h = 0;
  for (const auto& t : trees_) h = hash_combine(h, t->content_hash());
  return h;
}

}  // namespace rangemode::mode
