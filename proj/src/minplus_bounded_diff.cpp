#include "rangemode/minplus/bounded_diff.hpp"

#include <algorithm>
#include <stdexcept>

#include "rangemode/core/errors.hpp"
#include "rangemode/core/parallel.hpp"
#include "rangemode/core/rng.hpp"

namespace rangemode::minplus {

BoundedDiffMpq BoundedDiffMpq::build(Mat a, Mat b, int delta, std::int64_t w, std::int64_t l,
                                     std::uint64_t seed) {
  Builder builder(std::move(a), std::move(b), delta, w, l, seed);
  BuildBudget inf = BuildBudget::infinite();
  while (!builder.done()) builder.step(inf);
  return builder.finish();
}

BoundedDiffMpq::Builder::Builder(Mat a, Mat b, int delta, std::int64_t w, std::int64_t l,
                                 std::uint64_t seed) {
  if (delta < 1) throw std::invalid_argument("BoundedDiffMpq: delta must be >= 1");
  if (w < 1) throw std::invalid_argument("BoundedDiffMpq: w must be >= 1");
  if (l < 1) throw std::invalid_argument("BoundedDiffMpq: l must be >= 1");
  if (a.cols != b.rows) throw std::invalid_argument("BoundedDiffMpq: dimension mismatch");
  out_.a_ = std::move(a);
  out_.b_ = std::move(b);
  out_.delta_ = delta;
  out_.w_ = w;
  out_.l_ = l;
  out_.seed_ = seed;
  int n = out_.b_.cols;
  int c = out_.a_.cols;
  out_.nblocks_ = n > 0 ? (n + delta - 1) / delta : 0;
  out_.rounds_ = n > 0 && c > 0 ? delta : 0;
  out_.bucket_p_ = static_cast<int>(std::max<std::int64_t>(1, (l + delta - 1) / delta));
  if (c > 0) out_.bucket_p_ = std::min(out_.bucket_p_, c);
  // All randomness is drawn up front so budgeted and one-shot builds agree.
  Rng rng(seed);
  for (int r = 0; r < out_.rounds_; ++r) out_.anchors_.push_back(static_cast<int>(rng.below(n)));
  out_.stats_.rounds = out_.rounds_;
  out_.stats_.bucket_size = out_.bucket_p_;
}

void BoundedDiffMpq::Builder::step(BuildBudget& budget) {
  Mat& a = out_.a_;
  Mat& b = out_.b_;
  int n = b.cols;
  int c = a.cols;
  switch (phase_) {
    case kValidate: {
      // Within every column block, each row of B may move by at most w.
      while (row_ < c && !budget.exhausted()) {
        int k = static_cast<int>(row_);
        const std::int64_t* br = b.row(k);
        for (int blk = 0; blk < out_.nblocks_; ++blk) {
          int j0 = blk * out_.delta_;
          int j1 = std::min(j0 + out_.delta_, n);
          int jmin = j0, jmax = j0;
          for (int j = j0; j < j1; ++j) {
            if (!finite(br[j])) throw ValidationError("BoundedDiffMpq: B entry must be finite", k, j, -1);
            if (br[j] < br[jmin]) jmin = j;
            if (br[j] > br[jmax]) jmax = j;
          }
          if (br[jmax] - br[jmin] > out_.w_)
            throw ValidationError("BoundedDiffMpq: block bounded-difference violated", k, jmax, jmin);
        }
        budget.charge(std::max(1, n));
        ++row_;
      }
      if (row_ == c) {
        phase_ = kEstimate;
        row_ = 0;
      }
      return;
    }
    case kEstimate: {
      if (out_.b_est_.rows == 0 && c > 0 && n > 0) out_.b_est_ = Mat(c, n, 0);
      while (row_ < c && n > 0 && !budget.exhausted()) {
        int k = static_cast<int>(row_);
        for (int j = 0; j < n; ++j) out_.b_est_.at(k, j) = b.at(k, out_.rep_of_block(out_.block_of(j)));
        budget.charge(std::max(1, n));
        ++row_;
      }
      if (row_ >= c || n == 0) {
        phase_ = kThresholds;
        row_ = 0;
        out_.thresholds_.assign(static_cast<size_t>(a.rows) * std::max(1, out_.nblocks_), kInf);
      }
      return;
    }
    case kThresholds: {
      auto compute_row = [&](std::int64_t i) {
        std::vector<std::int64_t> sums;
        sums.reserve(static_cast<size_t>(c));
        for (int blk = 0; blk < out_.nblocks_; ++blk) {
          int rep = out_.rep_of_block(blk);
          sums.clear();
          for (int k = 0; k < c; ++k) {
            std::int64_t av = a.at(static_cast<int>(i), k);
            if (finite(av)) sums.push_back(av + b.at(k, rep));
          }
          if (static_cast<std::int64_t>(sums.size()) >= out_.l_) {
            std::nth_element(sums.begin(), sums.begin() + (out_.l_ - 1), sums.end());
            out_.thresholds_[static_cast<size_t>(i) * out_.nblocks_ + blk] = sums[static_cast<size_t>(out_.l_ - 1)];
          }
        }
      };
      if (budget.unlimited) {
        std::int64_t first = row_;
        parallel_for(a.rows - first, static_cast<std::int64_t>(out_.nblocks_) * c,
                     [&](std::int64_t d) { compute_row(first + d); });
        row_ = a.rows;
      } else {
        while (row_ < a.rows && !budget.exhausted()) {
          compute_row(row_);
          budget.charge(std::max<std::int64_t>(1, static_cast<std::int64_t>(out_.nblocks_) * c));
          ++row_;
        }
      }
      if (row_ == a.rows) {
        phase_ = kLowLists;
        row_ = 0;
        out_.low_lists_.off.assign(1, 0);
      }
      return;
    }
    case kLowLists: {
      // Per (i, block): indices whose estimated sum sits more than 2w below
      // the threshold, ascending by shifted value. Fewer than l exist.
      std::vector<std::pair<std::int64_t, std::int32_t>> cand;
      while (row_ < a.rows && !budget.exhausted()) {
        int i = static_cast<int>(row_);
        for (int blk = 0; blk < out_.nblocks_; ++blk) {
          std::int64_t thr = out_.thresholds_[static_cast<size_t>(i) * out_.nblocks_ + blk];
          int rep = out_.rep_of_block(blk);
          cand.clear();
          for (int k = 0; k < c; ++k) {
            std::int64_t av = a.at(i, k);
            if (!finite(av)) continue;
            std::int64_t est = av + b.at(k, rep);
            // An infinite threshold means fewer than l finite sums exist:
            // treat them all as far-below so they are always enumerated.
            std::int64_t shifted = thr >= kInf ? -kInf : est - thr;
            if (shifted < -2 * out_.w_) cand.emplace_back(shifted, k);
          }
          std::sort(cand.begin(), cand.end());
          if (static_cast<std::int64_t>(cand.size()) >= out_.l_)
            throw std::logic_error("BoundedDiffMpq: low list exceeded query budget");
          for (auto& [sv, k] : cand) out_.low_lists_.dat.push_back(k);
          out_.low_lists_.off.push_back(static_cast<std::int64_t>(out_.low_lists_.dat.size()));
        }
        budget.charge(std::max<std::int64_t>(1, static_cast<std::int64_t>(out_.nblocks_) * c));
        ++row_;
      }
      if (row_ == a.rows) {
        out_.stats_.low_entries = static_cast<std::int64_t>(out_.low_lists_.dat.size());
        out_.covered_round_.assign(static_cast<size_t>(a.rows) * std::max(1, c), -1);
        phase_ = out_.rounds_ > 0 ? kRoundFill : kNearLists;
        round_ = 0;
        row_ = 0;
        if (phase_ == kRoundFill) start_round_fill();
      }
      return;
    }
    case kRoundFill: {
      if (budget.unlimited) {
        std::int64_t first = row_;
        parallel_for(a.rows - first, c, [&](std::int64_t d) { fill_round_a_row(first + d); });
        row_ = a.rows;
      } else {
        while (row_ < a.rows && !budget.exhausted()) {
          fill_round_a_row(row_);
          budget.charge(std::max(1, c));
          ++row_;
        }
        if (row_ < a.rows) return;
      }
      // Shift B against the anchor column; rows stay finite.
      int anchor = out_.anchors_[static_cast<size_t>(round_)];
      round_b_ = Mat(c, n, 0);
      parallel_for(c, n, [&](std::int64_t k) {
        std::int64_t base = b.at(static_cast<int>(k), anchor);
        for (int j = 0; j < n; ++j) round_b_.at(static_cast<int>(k), j) = b.at(static_cast<int>(k), j) - base;
      });
      budget.charge(static_cast<std::int64_t>(c) * std::max(1, n));
      inner_builder_ = std::make_unique<BucketedMpq::Builder>(std::move(round_a_), std::move(round_b_),
                                                              3 * out_.w_, out_.bucket_p_);
      phase_ = kRoundInner;
      return;
    }
    case kRoundInner: {
      inner_builder_->step(budget);
      if (!inner_builder_->done()) return;
      out_.inners_.push_back(inner_builder_->finish());
      inner_builder_.reset();
      ++round_;
      row_ = 0;
      if (round_ < out_.rounds_) {
        phase_ = kRoundFill;
        start_round_fill();
      } else {
        phase_ = kNearLists;
        out_.near_lists_.off.assign(1, 0);
      }
      return;
    }
    case kNearLists: {
      if (out_.near_lists_.off.empty()) out_.near_lists_.off.assign(1, 0);
      while (row_ < a.rows && !budget.exhausted()) {
        int i = static_cast<int>(row_);
        for (int blk = 0; blk < out_.nblocks_; ++blk) {
          std::int64_t thr = out_.thresholds_[static_cast<size_t>(i) * out_.nblocks_ + blk];
          int rep = out_.rep_of_block(blk);
          if (thr < kInf) {
            for (int k = 0; k < c; ++k) {
              if (out_.covered_round_[static_cast<size_t>(i) * c + k] >= 0) continue;
              std::int64_t av = a.at(i, k);
              if (!finite(av)) continue;
              std::int64_t shifted = av + b.at(k, rep) - thr;
              if (shifted >= -2 * out_.w_ && shifted <= 2 * out_.w_)
                out_.near_lists_.dat.push_back(k);
            }
          }
          out_.near_lists_.off.push_back(static_cast<std::int64_t>(out_.near_lists_.dat.size()));
        }
        budget.charge(std::max<std::int64_t>(1, static_cast<std::int64_t>(out_.nblocks_) * c));
        ++row_;
      }
      if (row_ == a.rows) {
        out_.stats_.near_entries = static_cast<std::int64_t>(out_.near_lists_.dat.size());
        phase_ = kFinalize;
      }
      return;
    }
    case kFinalize: {
      StreamHash h;
      h.put(out_.a_.content_hash());
      h.put(out_.b_.content_hash());
      h.put_i64(out_.delta_);
      h.put_i64(out_.w_);
      h.put_i64(out_.l_);
      for (auto v : out_.thresholds_) h.put_i64(v);
      for (auto v : out_.low_lists_.dat) h.put_i64(v);
      for (auto v : out_.near_lists_.dat) h.put_i64(v);
      for (auto v : out_.covered_round_) h.put_i64(v);
      for (auto v : out_.anchors_) h.put_i64(v);
      out_.static_hash_ = h.value();
      budget.charge(static_cast<std::int64_t>(out_.thresholds_.size()));
      phase_ = kDone;
      return;
    }
    default:
      return;
  }
}

void BoundedDiffMpq::Builder::start_round_fill() {
  round_a_ = Mat(out_.a_.rows, out_.a_.cols, kInf);
}

void BoundedDiffMpq::Builder::fill_round_a_row(std::int64_t i) {
  Mat& a = out_.a_;
  Mat& b = out_.b_;
  int c = a.cols;
  int anchor = out_.anchors_[static_cast<size_t>(round_)];
  std::int64_t thr = out_.thresholds_[static_cast<size_t>(i) * out_.nblocks_ + out_.block_of(anchor)];
  if (thr >= kInf) return;
  for (int k = 0; k < c; ++k) {
    if (out_.covered_round_[static_cast<size_t>(i) * c + k] >= 0) continue;
    std::int64_t av = a.at(static_cast<int>(i), k);
    if (!finite(av)) continue;
    std::int64_t shifted = av + b.at(k, anchor) - thr;
    if (shifted >= -3 * out_.w_ && shifted <= 3 * out_.w_) {
      round_a_.at(static_cast<int>(i), k) = shifted;
      out_.covered_round_[static_cast<size_t>(i) * c + k] = static_cast<std::int32_t>(round_);
    }
  }
}

BoundedDiffMpq BoundedDiffMpq::Builder::finish() {
  if (phase_ != kDone) throw std::logic_error("BoundedDiffMpq::Builder::finish: build incomplete");
  return std::move(out_);
}

std::optional<BoundedDiffMpq::Result> BoundedDiffMpq::query(int i, int j, std::span<const int> forbidden) {
  if (i < 0 || i >= a_.rows || j < 0 || j >= b_.cols)
    throw std::out_of_range("BoundedDiffMpq::query: index out of range");
  if (static_cast<std::int64_t>(forbidden.size()) >= l_)
    throw std::invalid_argument("BoundedDiffMpq::query: forbidden set exceeds budget");
  int c = a_.cols;
  if (c == 0) return std::nullopt;

  scratch_.assign(forbidden.begin(), forbidden.end());
  std::sort(scratch_.begin(), scratch_.end());
  scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
  for (int k : scratch_)
    if (k < 0 || k >= c) throw std::out_of_range("BoundedDiffMpq::query: forbidden index out of range");
  auto in_forbidden = [&](int k) { return std::binary_search(scratch_.begin(), scratch_.end(), k); };

  Best best;

  // Rounds: covered pairs. Forbidden indices are only relevant to the round
  // that covers them.
  for (int r = 0; r < rounds_; ++r) {
    sub_forbidden_.clear();
    for (int k : scratch_)
      if (covered_round_[static_cast<size_t>(i) * c + k] == r) sub_forbidden_.push_back(k);
    auto sub = inners_[static_cast<size_t>(r)].query(i, j, sub_forbidden_);
    if (!sub) continue;
    std::int64_t thr = thresholds_[static_cast<size_t>(i) * nblocks_ + block_of(anchors_[static_cast<size_t>(r)])];
    best.offer(sub->value + thr, sub->witness);
  }

  int blk = block_of(j);
  std::int64_t lrow = static_cast<std::int64_t>(i) * nblocks_ + blk;

  // Far-below-threshold candidates (exact sums at the query column).
  for (std::int32_t k : low_lists_.row(lrow)) {
    if (in_forbidden(k)) continue;
    best.offer(a_.at(i, k) + b_.at(k, j), k);
  }

  // Uncovered near-threshold candidates.
  for (std::int32_t k : near_lists_.row(lrow)) {
    if (in_forbidden(k)) continue;
    best.offer(a_.at(i, k) + b_.at(k, j), k);
  }

  if (!best.valid()) return std::nullopt;
  return Result{best.value, best.witness};
}

std::uint64_t BoundedDiffMpq::checksum() const {
  std::uint64_t h = static_hash_;
  for (const auto& inner : inners_) h = hash_combine(h, inner.checksum());
  return h;
}

std::uint64_t BoundedDiffMpq::checksum_recompute() const {
  std::uint64_t h = static_hash_;
  for (const auto& inner : inners_) h = hash_combine(h, inner.checksum_recompute());
  return h;
}

bool lth_smallest_close(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                        std::int64_t w, std::int64_t l) {
  if (a.size() != b.size()) throw std::invalid_argument("lth_smallest_close: size mismatch");
  if (l < 1 || static_cast<size_t>(l) > a.size()) throw std::invalid_argument("lth_smallest_close: l out of range");
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] - b[k] > w || b[k] - a[k] > w)
      throw std::invalid_argument("lth_smallest_close: sequences not pointwise close");
  std::vector<std::int64_t> sa(a.begin(), a.end());
  std::vector<std::int64_t> sb(b.begin(), b.end());
  std::nth_element(sa.begin(), sa.begin() + (l - 1), sa.end());
  std::nth_element(sb.begin(), sb.begin() + (l - 1), sb.end());
  std::int64_t d = sa[static_cast<size_t>(l - 1)] - sb[static_cast<size_t>(l - 1)];
  return d <= w && -d <= w;
}

}  // namespace rangemode::minplus
