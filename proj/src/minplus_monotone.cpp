#include "rangemode/minplus/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rangemode/core/errors.hpp"

namespace rangemode::minplus {

MonotoneMpq MonotoneMpq::build(Mat a, Mat b, std::int64_t l, std::int64_t drop_bound,
                               const OmegaFn& omega, std::uint64_t seed) {
  Builder builder(std::move(a), std::move(b), l, drop_bound, omega, seed);
  BuildBudget inf = BuildBudget::infinite();
  while (!builder.done()) builder.step(inf);
  return builder.finish();
}

MonotoneMpq::Builder::Builder(Mat a, Mat b, std::int64_t l, std::int64_t drop_bound,
                              const OmegaFn& omega, std::uint64_t seed) {
  if (l < 1) throw std::invalid_argument("MonotoneMpq: l must be >= 1");
  if (drop_bound < 1) throw std::invalid_argument("MonotoneMpq: drop bound must be >= 1");
  if (a.cols != b.rows) throw std::invalid_argument("MonotoneMpq: dimension mismatch");
  out_.a_ = std::move(a);
  out_.b_ = std::move(b);
  out_.l_ = l;
  out_.drop_bound_ = drop_bound;

  // Block width tuned from the rectangular-MM exponent; affects cost only.
  int n_tune = std::max({2, out_.a_.rows, out_.b_.cols});
  int c = out_.a_.cols;
  double s = c >= 2 ? std::log(static_cast<double>(c)) / std::log(static_cast<double>(n_tune)) : 1.0;
  double dd = std::pow(static_cast<double>(l), 0.2) *
              std::pow(static_cast<double>(n_tune), (2.0 - omega(s)) / 5.0);
  out_.delta_ = static_cast<int>(std::floor(dd));
  out_.delta_ = std::max(1, std::min(out_.delta_, std::max(1, out_.b_.cols)));
  out_.w_ = static_cast<std::int64_t>(out_.delta_) * out_.delta_;
  out_.nblocks_ = out_.b_.cols > 0 ? (out_.b_.cols + out_.delta_ - 1) / out_.delta_ : 0;

  std::int64_t maxabs = 0;
  for (std::int64_t v : out_.a_.v)
    if (finite(v)) maxabs = std::max(maxabs, v < 0 ? -v : v);
  for (std::int64_t v : out_.b_.v)
    if (finite(v)) maxabs = std::max(maxabs, v < 0 ? -v : v);
  out_.m_ = 4 * maxabs + 4 * out_.w_ + 1;  // finite sentinel dominating every true sum

  col_sums_.assign(static_cast<size_t>(out_.b_.cols), 0);
  seed_ = seed;
}

void MonotoneMpq::Builder::step(BuildBudget& budget) {
  Mat& a = out_.a_;
  Mat& b = out_.b_;
  int c = a.cols;
  int n = b.cols;
  switch (phase_) {
    case kValidate: {
      while (row_ < c && !budget.exhausted()) {
        int k = static_cast<int>(row_);
        const std::int64_t* br = b.row(k);
        for (int j = 0; j < n; ++j) {
          if (!finite(br[j])) throw ValidationError("MonotoneMpq: B entry must be finite", k, j, -1);
          if (j + 1 < n && br[j] < br[j + 1])
            throw ValidationError("MonotoneMpq: row not non-increasing", k, j, j + 1);
          col_sums_[static_cast<size_t>(j)] += br[j];
        }
        budget.charge(std::max(1, n));
        ++row_;
      }
      if (row_ < c) return;
      for (int j = 0; j + 1 < n; ++j) {
        if (col_sums_[static_cast<size_t>(j)] - col_sums_[static_cast<size_t>(j) + 1] > out_.drop_bound_)
          throw ValidationError("MonotoneMpq: column-sum drop exceeds bound", -1, j, j + 1);
      }
      budget.charge(std::max(1, n));
      phase_ = kClip;
      row_ = 0;
      b_hat_ = b;
      out_.clipped_by_block_.assign(static_cast<size_t>(out_.nblocks_), {});
      return;
    }
    case kClip: {
      while (row_ < out_.nblocks_ && !budget.exhausted()) {
        int blk = static_cast<int>(row_);
        int j0 = blk * out_.delta_;
        int j1 = std::min(j0 + out_.delta_, n) - 1;
        auto& clipped = out_.clipped_by_block_[static_cast<size_t>(blk)];
        for (int k = 0; k < c; ++k) {
          if (b.at(k, j0) - b.at(k, j1) > out_.w_) {
            clipped.push_back(k);
            for (int j = j0; j <= j1; ++j) b_hat_.at(k, j) = out_.m_;
          }
        }
        // Averaging bound on how many rows a block may clip.
        if (static_cast<std::int64_t>(clipped.size()) * out_.w_ >
            static_cast<std::int64_t>(out_.delta_) * out_.drop_bound_)
          throw std::logic_error("MonotoneMpq: clipped-row bound violated");
        budget.charge(static_cast<std::int64_t>(c) * std::max(1, j1 - j0 + 1));
        ++row_;
      }
      if (row_ == out_.nblocks_) {
        phase_ = kExceptions;
        row_ = 0;
      }
      return;
    }
    case kExceptions: {
      while (row_ < n && !budget.exhausted()) {
        int j = static_cast<int>(row_);
        const auto& clipped = out_.clipped_by_block_[static_cast<size_t>(j / out_.delta_)];
        if (!clipped.empty()) {
          ExcCol col;
          col.keys = clipped;
          col.grid = MinGrid(a.rows, static_cast<int>(clipped.size()));
          for (int i = 0; i < a.rows; ++i) {
            std::int64_t* rowdat = col.grid.row_data(i);
            for (size_t x = 0; x < clipped.size(); ++x) {
              std::int64_t av = a.at(i, clipped[x]);
              rowdat[x] = finite(av) ? av + b.at(clipped[x], j) : MinGrid::kInfValue;
            }
          }
          col.grid.finalize();
          out_.exceptions_.emplace(j, std::move(col));
          budget.charge(static_cast<std::int64_t>(a.rows) * static_cast<std::int64_t>(clipped.size()));
        } else {
          budget.charge(1);
        }
        ++row_;
      }
      if (row_ == n) {
        phase_ = kInner;
        inner_builder_ = std::make_unique<BoundedDiffMpq::Builder>(out_.a_, std::move(b_hat_), out_.delta_,
                                                                   out_.w_, out_.l_, seed_);
      }
      return;
    }
    case kInner: {
      inner_builder_->step(budget);
      if (!inner_builder_->done()) return;
      out_.inner_ = inner_builder_->finish();
      inner_builder_.reset();
      phase_ = kFinalize;
      return;
    }
    case kFinalize: {
      StreamHash h;
      h.put(out_.a_.content_hash());
      h.put(out_.b_.content_hash());
      h.put_i64(out_.l_);
      h.put_i64(out_.drop_bound_);
      h.put_i64(out_.delta_);
      h.put_i64(out_.w_);
      h.put_i64(out_.m_);
      for (const auto& blk : out_.clipped_by_block_)
        for (auto k : blk) h.put_i64(k);
      out_.static_hash_ = h.value();
      budget.charge(1);
      phase_ = kDone;
      return;
    }
    default:
      return;
  }
}

MonotoneMpq MonotoneMpq::Builder::finish() {
  if (phase_ != kDone) throw std::logic_error("MonotoneMpq::Builder::finish: build incomplete");
  return std::move(out_);
}

std::optional<MonotoneMpq::Result> MonotoneMpq::query(int i, int j, std::span<const int> forbidden) {
  if (i < 0 || i >= a_.rows || j < 0 || j >= b_.cols)
    throw std::out_of_range("MonotoneMpq::query: index out of range");
  if (static_cast<std::int64_t>(forbidden.size()) >= l_)
    throw std::invalid_argument("MonotoneMpq::query: forbidden set exceeds budget");
  if (a_.cols == 0) return std::nullopt;

  Best best;
  auto sub = inner_.query(i, j, forbidden);
  // Results within 2w of the clip sentinel went through a clipped entry;
  // their true sums are served by the exception tables below.
  if (sub && sub->value < m_ - 2 * w_) best.offer(sub->value, sub->witness);

  auto it = exceptions_.find(j);
  if (it != exceptions_.end()) {
    ExcCol& col = it->second;
    scratch_.assign(forbidden.begin(), forbidden.end());
    std::sort(scratch_.begin(), scratch_.end());
    for (int k : scratch_) {
      auto pos = std::lower_bound(col.keys.begin(), col.keys.end(), k);
      if (pos != col.keys.end() && *pos == k)
        col.grid.mask(i, static_cast<int>(pos - col.keys.begin()));
    }
    auto [val, slot] = col.grid.min_slot(i);
    if (slot >= 0) best.offer(val, col.keys[static_cast<size_t>(slot)]);
    col.grid.rollback();
  }

  if (!best.valid()) return std::nullopt;
  return Result{best.value, best.witness};
}

std::uint64_t MonotoneMpq::checksum() const {
  std::uint64_t h = hash_combine(static_hash_, inner_.checksum());
  for (const auto& [j, col] : exceptions_) h = hash_combine(h, col.grid.checksum());
  return h;
}

std::uint64_t MonotoneMpq::checksum_recompute() const {
  std::uint64_t h = hash_combine(static_hash_, inner_.checksum_recompute());
  for (const auto& [j, col] : exceptions_) h = hash_combine(h, col.grid.checksum_recompute());
  return h;
}

}  // namespace rangemode::minplus
