#include "rangemode/minplus/bucketed.hpp"

#include <algorithm>
#include <stdexcept>

#include "rangemode/core/errors.hpp"
#include "rangemode/core/parallel.hpp"

namespace rangemode::minplus {

BucketedMpq BucketedMpq::build(Mat a, Mat b, std::int64_t w, int p) {
  Builder builder(std::move(a), std::move(b), w, p);
  BuildBudget inf = BuildBudget::infinite();
  while (!builder.done()) builder.step(inf);
  return builder.finish();
}

BucketedMpq::Builder::Builder(Mat a, Mat b, std::int64_t w, int p) {
  if (w < 1) throw std::invalid_argument("BucketedMpq: w must be >= 1");
  if (a.cols != b.rows) throw std::invalid_argument("BucketedMpq: dimension mismatch");
  if (p < 1 || (a.cols > 0 && p > a.cols)) throw std::invalid_argument("BucketedMpq: p out of [1, inner]");
  out_.a_ = std::move(a);
  out_.b_ = std::move(b);
  out_.w_ = w;
  out_.p_ = p;
  int c = out_.a_.cols;
  out_.nb_ = c > 0 ? (c + p - 1) / p : 0;
}

void BucketedMpq::Builder::step(BuildBudget& budget) {
  Mat& a = out_.a_;
  Mat& b = out_.b_;
  int c = a.cols;
  int n = b.cols;
  switch (phase_) {
    case kValidate: {
      while (row_ < a.rows && !budget.exhausted()) {
        const std::int64_t* r = a.row(static_cast<int>(row_));
        for (int k = 0; k < c; ++k)
          if (finite(r[k]) && (r[k] < -out_.w_ || r[k] > out_.w_))
            throw ValidationError("BucketedMpq: A entry out of [-w, w]", row_, k, -1);
        budget.charge(std::max(1, c));
        ++row_;
      }
      if (row_ < a.rows) return;
      for (int k = 0; k < b.rows; ++k)
        for (int j = 0; j < n; ++j)
          if (!finite(b.at(k, j))) throw ValidationError("BucketedMpq: B entry must be finite", k, j, -1);
      budget.charge(static_cast<std::int64_t>(b.rows) * std::max(1, n));
      phase_ = kBuckets;
      row_ = 0;
      return;
    }
    case kBuckets: {
      if (out_.order_.empty() && c > 0 && n > 0) {
        out_.order_.resize(static_cast<size_t>(n) * c);
        out_.bucket_of_.resize(static_cast<size_t>(n) * c);
        out_.lo_.assign(static_cast<size_t>(n) * out_.nb_, kInf);
        out_.hi_.assign(static_cast<size_t>(n) * out_.nb_, -kInf);
        out_.small_.assign(static_cast<size_t>(n) * out_.nb_, 0);
      }
      auto bucket_column = [&](std::int64_t jj) {
        int j = static_cast<int>(jj);
        std::int32_t* ord = out_.order_.data() + static_cast<size_t>(j) * c;
        for (int k = 0; k < c; ++k) ord[k] = k;
        std::sort(ord, ord + c, [&](int x, int y) {
          std::int64_t bx = b.at(x, j), by = b.at(y, j);
          return bx != by ? bx < by : x < y;
        });
        for (int r = 0; r < c; ++r) {
          int k = ord[r];
          int l = r / out_.p_;
          out_.bucket_of_[static_cast<size_t>(j) * c + k] = l;
          std::int64_t v = b.at(k, j);
          size_t cell = static_cast<size_t>(j) * out_.nb_ + l;
          out_.lo_[cell] = std::min(out_.lo_[cell], v);
          out_.hi_[cell] = std::max(out_.hi_[cell], v);
        }
        for (int l = 0; l < out_.nb_; ++l) {
          size_t cell = static_cast<size_t>(j) * out_.nb_ + l;
          if (out_.lo_[cell] <= out_.hi_[cell] && out_.hi_[cell] - out_.lo_[cell] <= 2 * out_.w_)
            out_.small_[cell] = 1;
        }
      };
      if (budget.unlimited && c > 0) {
        std::int64_t first = row_;
        parallel_for(n - first, 4 * c, [&](std::int64_t d) { bucket_column(first + d); });
        row_ = n;
      } else {
        while (row_ < n && c > 0 && !budget.exhausted()) {
          bucket_column(row_);
          budget.charge(2 * c);
          ++row_;
        }
      }
      if (row_ >= n || c == 0) {
        phase_ = kInnerCreate;
        row_ = 0;
      }
      return;
    }
    case kInnerCreate: {
      out_.inner_.resize(static_cast<size_t>(out_.nb_));
      for (int l = 0; l < out_.nb_; ++l) {
        bool any_small = false;
        for (int j = 0; j < n && !any_small; ++j) any_small = out_.small_[static_cast<size_t>(j) * out_.nb_ + l] != 0;
        if (!any_small) continue;
        // Shifted copy of B restricted to this bucket where it is small.
        Mat bl(c, n, kInf);
        for (int j = 0; j < n; ++j) {
          size_t cell = static_cast<size_t>(j) * out_.nb_ + l;
          if (!out_.small_[cell]) continue;
          std::int64_t shift = out_.lo_[cell] + out_.w_;
          const std::int32_t* ord = out_.order_.data() + static_cast<size_t>(j) * c;
          int r_end = std::min((l + 1) * out_.p_, c);
          for (int r = l * out_.p_; r < r_end; ++r) bl.at(ord[r], j) = b.at(ord[r], j) - shift;
        }
        inner_builders_.emplace_back(l, std::make_unique<SmallEntriesMpq::Builder>(out_.a_, std::move(bl),
                                                                                   out_.w_, SmallEntriesMpq::Backend::kDirect));
        budget.charge(static_cast<std::int64_t>(c) * std::max(1, n));
      }
      phase_ = kInner;
      return;
    }
    case kInner: {
      while (inner_idx_ < inner_builders_.size() && !budget.exhausted()) {
        auto& [l, bld] = inner_builders_[inner_idx_];
        bld->step(budget);
        if (bld->done()) {
          out_.inner_[static_cast<size_t>(l)] = std::make_unique<SmallEntriesMpq>(bld->finish());
          ++inner_idx_;
        }
      }
      if (inner_idx_ == inner_builders_.size()) {
        inner_builders_.clear();
        phase_ = kTables;
        row_ = 0;
        out_.t_small_ = MinGrid(static_cast<std::int64_t>(a.rows) * n, std::max(1, out_.nb_));
        out_.t_large_ = CountGrid(static_cast<std::int64_t>(a.rows) * n, std::max(1, out_.nb_));
      }
      return;
    }
    case kTables: {
      std::int64_t per_row = std::max<std::int64_t>(1, static_cast<std::int64_t>(n) * c);
      if (budget.unlimited) {
        std::int64_t first = row_;
        parallel_for(a.rows - first, per_row, [&](std::int64_t d) { fill_table_row(first + d); });
        row_ = a.rows;
      } else {
        while (row_ < a.rows && !budget.exhausted()) {
          fill_table_row(row_);
          budget.charge(per_row);
          ++row_;
        }
      }
      if (row_ == a.rows) phase_ = kFinalize;
      return;
    }
    case kFinalize: {
      out_.t_small_.finalize();
      out_.t_large_.finalize();
      StreamHash h;
      h.put(out_.a_.content_hash());
      h.put(out_.b_.content_hash());
      h.put_i64(out_.w_);
      h.put_i64(out_.p_);
      for (auto v : out_.lo_) h.put_i64(v);
      for (auto v : out_.hi_) h.put_i64(v);
      for (auto v : out_.small_) h.put_i64(v);
      for (auto& ip : out_.inner_) h.put(ip ? ip->checksum() : 0);
      out_.static_hash_ = h.value();
      budget.charge(out_.t_small_.rows());
      phase_ = kDone;
      return;
    }
    default:
      return;
  }
}

void BucketedMpq::Builder::fill_table_row(std::int64_t i) {
  Mat& a = out_.a_;
  Mat& b = out_.b_;
  int c = a.cols;
  int n = b.cols;
  const std::int64_t* ar = a.row(static_cast<int>(i));
  for (int j = 0; j < n; ++j) {
    std::int64_t* ts = out_.t_small_.row_data(i * n + j);
    std::int32_t* tl = out_.t_large_.row_data(i * n + j);
    const std::int32_t* ord = out_.order_.data() + static_cast<size_t>(j) * c;
    for (int r = 0; r < c; ++r) {
      int k = ord[r];
      if (!finite(ar[k])) continue;
      int l = r / out_.p_;
      if (out_.small_[static_cast<size_t>(j) * out_.nb_ + l]) {
        std::int64_t sum = ar[k] + b.at(k, j);
        if (sum < ts[l]) ts[l] = sum;
      } else {
        tl[l]++;
      }
    }
  }
}

BucketedMpq BucketedMpq::Builder::finish() {
  if (phase_ != kDone) throw std::logic_error("BucketedMpq::Builder::finish: build incomplete");
  return std::move(out_);
}

std::span<const std::int32_t> BucketedMpq::bucket_members(int j, int bucket) const {
  int c = a_.cols;
  int lo = bucket * p_;
  int hi = std::min((bucket + 1) * p_, c);
  return {order_.data() + static_cast<size_t>(j) * c + lo, static_cast<size_t>(hi - lo)};
}

std::optional<BucketedMpq::Result> BucketedMpq::query(int i, int j, std::span<const int> forbidden) {
  if (i < 0 || i >= a_.rows || j < 0 || j >= b_.cols)
    throw std::out_of_range("BucketedMpq::query: index out of range");
  touches_ = 0;
  if (a_.cols == 0) return std::nullopt;
  std::int64_t row = grid_row(i, j);

  scratch_.assign(forbidden.begin(), forbidden.end());
  std::sort(scratch_.begin(), scratch_.end());
  scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
  auto in_forbidden = [&](int k) { return std::binary_search(scratch_.begin(), scratch_.end(), k); };

  // Group forbidden indices by bucket; mask large-bucket members out of the
  // candidate counts (journaled).
  std::vector<std::pair<int, int>> small_hits;  // (bucket, k)
  for (int k : scratch_) {
    if (k < 0 || k >= a_.cols) throw std::out_of_range("BucketedMpq::query: forbidden index out of range");
    ++touches_;
    int l = bucket_of_[static_cast<size_t>(j) * a_.cols + k];
    if (small_[static_cast<size_t>(j) * nb_ + l]) {
      small_hits.emplace_back(l, k);
    } else if (finite(a_.at(i, k))) {
      t_large_.add(row, l, -1);
    }
  }
  std::sort(small_hits.begin(), small_hits.end());

  struct Cand {
    std::int64_t value;
    int bucket;
    int witness;  // -1: bucket not scanned yet
  };
  std::vector<Cand> cands;

  // Small buckets intersecting the forbidden set: query their shifted inner
  // structure with just the local forbidden indices, and mask their slot so
  // the unmasked minimum below cannot double-count them.
  std::vector<int> local;
  for (size_t x = 0; x < small_hits.size();) {
    int l = small_hits[x].first;
    local.clear();
    while (x < small_hits.size() && small_hits[x].first == l) local.push_back(small_hits[x++].second);
    touches_ += local.size();
    auto sub = inner_[static_cast<size_t>(l)]->query(i, j, local);
    if (sub) {
      std::int64_t shift = lo_[static_cast<size_t>(j) * nb_ + l] + w_;
      cands.push_back(Cand{*sub + shift, l, -1});
    }
    t_small_.mask(row, l);
  }

  // Best small bucket not touching the forbidden set.
  auto [sv, sl] = t_small_.min_slot(row);
  if (sl >= 0) cands.push_back(Cand{sv, sl, -1});

  // Two lowest large buckets that still hold a usable candidate; scan both.
  for (int which = 1; which <= 2; ++which) {
    int l = t_large_.kth_nonzero(row, which);
    if (l < 0) break;
    Best best;
    for (std::int32_t k : bucket_members(j, l)) {
      ++touches_;
      if (!finite(a_.at(i, k)) || in_forbidden(k)) continue;
      best.offer(a_.at(i, k) + b_.at(k, j), k);
    }
    if (best.valid()) cands.push_back(Cand{best.value, l, best.witness});
  }

  t_small_.rollback();
  t_large_.rollback();

  if (cands.empty()) return std::nullopt;
  const Cand* win = &cands[0];
  for (const Cand& cd : cands)
    if (cd.value < win->value || (cd.value == win->value && cd.bucket < win->bucket)) win = &cd;

  int witness = win->witness;
  if (witness < 0) {
    for (std::int32_t k : bucket_members(j, win->bucket)) {
      ++touches_;
      if (!finite(a_.at(i, k)) || in_forbidden(k)) continue;
      if (a_.at(i, k) + b_.at(k, j) == win->value) {
        witness = k;
        break;
      }
    }
  }
  if (witness < 0) throw std::logic_error("BucketedMpq::query: winner bucket lost its witness");
  return Result{win->value, witness};
}

BucketedMpq::Diagnostics BucketedMpq::self_check(std::int64_t max_violations) const {
  Diagnostics diag;
  std::vector<int> larges;
  std::vector<std::int64_t> best(static_cast<size_t>(std::max(1, nb_)));
  for (int j = 0; j < b_.cols; ++j) {
    larges.clear();
    for (int l = 0; l < nb_; ++l)
      if (!small_[static_cast<size_t>(j) * nb_ + l] && lo_[static_cast<size_t>(j) * nb_ + l] <= hi_[static_cast<size_t>(j) * nb_ + l])
        larges.push_back(l);
    if (larges.size() < 3) continue;
    for (int i = 0; i < a_.rows; ++i) {
      for (int l : larges) {
        std::int64_t m = kInf;
        for (std::int32_t k : bucket_members(j, l))
          if (finite(a_.at(i, k))) m = std::min(m, a_.at(i, k) + b_.at(k, j));
        best[static_cast<size_t>(l)] = m;
      }
      for (size_t x1 = 0; x1 < larges.size(); ++x1) {
        if (best[static_cast<size_t>(larges[x1])] >= kInf) continue;
        for (size_t x2 = x1 + 1; x2 < larges.size(); ++x2) {
          for (size_t x3 = x2 + 1; x3 < larges.size(); ++x3) {
            int l1 = larges[x1], l2 = larges[x2], l3 = larges[x3];
            if (best[static_cast<size_t>(l3)] >= kInf) continue;
            ++diag.checked;
            std::int64_t b1 = best[static_cast<size_t>(l1)];
            std::int64_t lo2 = lo_[static_cast<size_t>(j) * nb_ + l2];
            std::int64_t hi2 = hi_[static_cast<size_t>(j) * nb_ + l2];
            bool ok = b1 <= w_ + lo2 && w_ + lo2 < hi2 - w_ && hi2 - w_ <= best[static_cast<size_t>(l3)];
            if (!ok && static_cast<std::int64_t>(diag.violations.size()) < max_violations)
              diag.violations.push_back(Violation{i, j, l1, l2, l3});
          }
        }
      }
    }
  }
  return diag;
}

void BucketedMpq::debug_override_bucket_bounds(int j, int bucket, std::int64_t lo, std::int64_t hi) {
  lo_[static_cast<size_t>(j) * nb_ + bucket] = lo;
  hi_[static_cast<size_t>(j) * nb_ + bucket] = hi;
}

std::uint64_t BucketedMpq::checksum() const {
  std::uint64_t h = hash_combine(static_hash_, t_small_.checksum());
  h = hash_combine(h, t_large_.checksum());
  for (const auto& ip : inner_) h = hash_combine(h, ip ? ip->checksum() : 0);
  return h;
}

std::uint64_t BucketedMpq::checksum_recompute() const {
  std::uint64_t h = hash_combine(static_hash_, t_small_.checksum_recompute());
  h = hash_combine(h, t_large_.checksum_recompute());
  for (const auto& ip : inner_) h = hash_combine(h, ip ? ip->checksum_recompute() : 0);
  return h;
}

}  // namespace rangemode::minplus
