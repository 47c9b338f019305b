#include "rangemode/core/grids.hpp"

#include <stdexcept>

#include "rangemode/core/parallel.hpp"

namespace rangemode {

CountGrid::CountGrid(std::int64_t rows, int slots) : rows_(rows), slots_(slots) {
  pow2_ = detail::overlay_pow2(slots);
  cnt_.assign(static_cast<size_t>(rows) * slots, 0);
  ovl_.assign(static_cast<size_t>(rows) * 2 * pow2_, 0);
}

void CountGrid::finalize() {
  std::vector<std::uint64_t> rh(static_cast<size_t>(rows_), 0);
  parallel_for(rows_, slots_, [&](std::int64_t r) {
    const std::int32_t* c = cnt_.data() + r * slots_;
    std::int32_t* t = ovl_.data() + r * 2 * pow2_;
    for (int i = 0; i < 2 * pow2_; ++i) t[i] = 0;
    XorAcc acc;
    for (int s = 0; s < slots_; ++s) {
      t[pow2_ + s] = c[s] != 0 ? 1 : 0;
      acc.toggle(static_cast<std::uint64_t>(r * slots_ + s), static_cast<std::uint64_t>(c[s]));
    }
    for (int i = pow2_ - 1; i >= 1; --i) t[i] = t[2 * i] + t[2 * i + 1];
    rh[static_cast<size_t>(r)] = acc.value();
  });
  hash_.reset();
  for (std::uint64_t h : rh) hash_.fold(h);
}

void CountGrid::add(std::int64_t row, int slot, std::int32_t delta) {
  std::int32_t& c = cnt_[row * slots_ + slot];
  std::int32_t old = c;
  std::int32_t next = old + delta;
  if (next < 0) throw std::logic_error("CountGrid::add: count would go negative");
  c = next;
  if ((old == 0) != (next == 0))
    detail::nz_change(ovl_.data() + row * 2 * pow2_, pow2_, slot, next == 0 ? -1 : +1);
  hash_.update(static_cast<std::uint64_t>(row * slots_ + slot), static_cast<std::uint64_t>(old),
               static_cast<std::uint64_t>(next));
  journal_.push_back(JEntry{row, slot, delta});
}

int CountGrid::kth_nonzero(std::int64_t row, int k) const {
  return detail::nz_kth(ovl_.data() + row * 2 * pow2_, pow2_, k);
}

void CountGrid::rollback() {
  while (!journal_.empty()) {
    JEntry e = journal_.back();
    journal_.pop_back();
    std::int32_t& c = cnt_[e.row * slots_ + e.slot];
    std::int32_t old = c;
    std::int32_t next = old - e.delta;
    c = next;
    if ((old == 0) != (next == 0))
      detail::nz_change(ovl_.data() + e.row * 2 * pow2_, pow2_, e.slot, next == 0 ? -1 : +1);
    hash_.update(static_cast<std::uint64_t>(e.row * slots_ + e.slot), static_cast<std::uint64_t>(old),
                 static_cast<std::uint64_t>(next));
  }
}

std::uint64_t CountGrid::checksum_recompute() const {
  XorAcc acc;
  for (std::int64_t r = 0; r < rows_; ++r)
    for (int s = 0; s < slots_; ++s)
      acc.toggle(static_cast<std::uint64_t>(r * slots_ + s),
                 static_cast<std::uint64_t>(cnt_[r * slots_ + s]));
  return acc.value();
}

MinGrid::MinGrid(std::int64_t rows, int slots) : rows_(rows), slots_(slots) {
  pow2_ = detail::overlay_pow2(slots);
  val_.assign(static_cast<size_t>(rows) * slots, kInfValue);
  ovl_.assign(static_cast<size_t>(rows) * 2 * pow2_, kInfValue);
}

void MinGrid::finalize() {
  std::vector<std::uint64_t> rh(static_cast<size_t>(rows_), 0);
  parallel_for(rows_, slots_, [&](std::int64_t r) {
    const std::int64_t* v = val_.data() + r * slots_;
    std::int64_t* t = ovl_.data() + r * 2 * pow2_;
    for (int i = 0; i < 2 * pow2_; ++i) t[i] = kInfValue;
    XorAcc acc;
    for (int s = 0; s < slots_; ++s) {
      t[pow2_ + s] = v[s];
      acc.toggle(static_cast<std::uint64_t>(r * slots_ + s), static_cast<std::uint64_t>(v[s]));
    }
    for (int i = pow2_ - 1; i >= 1; --i) t[i] = std::min(t[2 * i], t[2 * i + 1]);
    rh[static_cast<size_t>(r)] = acc.value();
  });
  hash_.reset();
  for (std::uint64_t h : rh) hash_.fold(h);
}

void MinGrid::mask(std::int64_t row, int slot) {
  std::int64_t& v = val_[row * slots_ + slot];
  journal_.push_back(JEntry{row, slot, v});
  hash_.update(static_cast<std::uint64_t>(row * slots_ + slot), static_cast<std::uint64_t>(v),
               static_cast<std::uint64_t>(kInfValue));
  v = kInfValue;
  detail::min_set(ovl_.data() + row * 2 * pow2_, pow2_, slot, kInfValue);
}

std::pair<std::int64_t, int> MinGrid::min_slot(std::int64_t row) const {
  return detail::min_query(ovl_.data() + row * 2 * pow2_, pow2_);
}

void MinGrid::rollback() {
  while (!journal_.empty()) {
    JEntry e = journal_.back();
    journal_.pop_back();
    std::int64_t& v = val_[e.row * slots_ + e.slot];
    hash_.update(static_cast<std::uint64_t>(e.row * slots_ + e.slot), static_cast<std::uint64_t>(v),
                 static_cast<std::uint64_t>(e.old));
    v = e.old;
    detail::min_set(ovl_.data() + e.row * 2 * pow2_, pow2_, e.slot, e.old);
  }
}

std::uint64_t MinGrid::checksum_recompute() const {
  XorAcc acc;
  for (std::int64_t r = 0; r < rows_; ++r)
    for (int s = 0; s < slots_; ++s)
      acc.toggle(static_cast<std::uint64_t>(r * slots_ + s),
                 static_cast<std::uint64_t>(val_[r * slots_ + s]));
  return acc.value();
}

}  // namespace rangemode
