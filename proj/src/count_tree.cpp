#include "rangemode/core/count_tree.hpp"

#include <stdexcept>

#include "rangemode/detail/overlay.hpp"

namespace rangemode {

CountTree::CountTree(int domain) : domain_(domain) {
  if (domain < 1) throw std::invalid_argument("CountTree: domain must be positive");
  pow2_ = detail::overlay_pow2(domain);
  counts_.assign(static_cast<size_t>(domain), 0);
  nz_.assign(static_cast<size_t>(2 * pow2_), 0);
  for (int i = 0; i < domain_; ++i) hash_.toggle(static_cast<std::uint64_t>(i), 0);
}

void CountTree::add(int slot, std::int64_t delta) {
  if (slot < 0 || slot >= domain_) throw std::out_of_range("CountTree::add: slot out of domain");
  std::int64_t old = counts_[slot];
  std::int64_t next = old + delta;
  if (next < 0) throw std::logic_error("CountTree::add: count would go negative");
  counts_[slot] = next;
  if ((old == 0) != (next == 0)) detail::nz_change(nz_.data(), pow2_, slot, next == 0 ? -1 : +1);
  hash_.update(static_cast<std::uint64_t>(slot), static_cast<std::uint64_t>(old),
               static_cast<std::uint64_t>(next));
  journal_.emplace_back(slot, delta);
}

std::int64_t CountTree::count(int slot) const {
  if (slot < 0 || slot >= domain_) throw std::out_of_range("CountTree::count: slot out of domain");
  return counts_[slot];
}

std::optional<int> CountTree::first_nonzero() const {
  int s = detail::nz_kth(nz_.data(), pow2_, 1);
  if (s < 0) return std::nullopt;
  return s;
}

std::pair<std::optional<int>, std::optional<int>> CountTree::first_two_nonzero() const {
  int a = detail::nz_kth(nz_.data(), pow2_, 1);
  if (a < 0) return {std::nullopt, std::nullopt};
  int b = detail::nz_kth(nz_.data(), pow2_, 2);
  if (b < 0) return {a, std::nullopt};
  return {a, b};
}

void CountTree::checkpoint() { journal_.clear(); }

void CountTree::rollback() {
  while (!journal_.empty()) {
    auto [slot, delta] = journal_.back();
    journal_.pop_back();
    std::int64_t old = counts_[slot];
    std::int64_t next = old - delta;
    counts_[slot] = next;
    if ((old == 0) != (next == 0)) detail::nz_change(nz_.data(), pow2_, slot, next == 0 ? -1 : +1);
    hash_.update(static_cast<std::uint64_t>(slot), static_cast<std::uint64_t>(old),
                 static_cast<std::uint64_t>(next));
  }
}

std::uint64_t CountTree::checksum_recompute() const {
  XorAcc acc;
  for (int i = 0; i < domain_; ++i)
    acc.toggle(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(counts_[i]));
  return acc.value();
}

}  // namespace rangemode
