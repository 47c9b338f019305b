#include "rangemode/minplus/small_entries.hpp"

#include <algorithm>
#include <stdexcept>

#include "rangemode/core/bigint.hpp"
#include "rangemode/core/errors.hpp"
#include "rangemode/core/parallel.hpp"

namespace rangemode::minplus {

SmallEntriesMpq SmallEntriesMpq::build(Mat a, Mat b, std::int64_t w, Backend backend) {
  Builder builder(std::move(a), std::move(b), w, backend);
  BuildBudget inf = BuildBudget::infinite();
  while (!builder.done()) builder.step(inf);
  return builder.finish();
}

SmallEntriesMpq::Builder::Builder(Mat a, Mat b, std::int64_t w, Backend backend) : backend_(backend) {
  if (w < 1) throw std::invalid_argument("SmallEntriesMpq: w must be >= 1");
  if (a.cols != b.rows) throw std::invalid_argument("SmallEntriesMpq: dimension mismatch");
  out_.a_ = std::move(a);
  out_.b_ = std::move(b);
  out_.w_ = w;
  out_.slots_ = static_cast<int>(4 * w + 1);
}

void SmallEntriesMpq::Builder::step(BuildBudget& budget) {
  Mat& a = out_.a_;
  Mat& b = out_.b_;
  switch (phase_) {
    case kValidateA: {
      while (row_ < a.rows && !budget.exhausted()) {
        const std::int64_t* r = a.row(static_cast<int>(row_));
        for (int k = 0; k < a.cols; ++k) {
          if (finite(r[k]) && (r[k] < -out_.w_ || r[k] > out_.w_))
            throw ValidationError("SmallEntriesMpq: A entry out of [-w, w]", row_, k, -1);
        }
        budget.charge(std::max(1, a.cols));
        ++row_;
      }
      if (row_ == a.rows) {
        phase_ = kValidateB;
        row_ = 0;
      }
      return;
    }
    case kValidateB: {
      if (out_.col_index_.empty()) out_.col_index_.assign(static_cast<size_t>(b.cols), -1);
      while (row_ < b.rows && !budget.exhausted()) {
        const std::int64_t* r = b.row(static_cast<int>(row_));
        for (int j = 0; j < b.cols; ++j) {
          if (!finite(r[j])) continue;
          if (r[j] < -out_.w_ || r[j] > out_.w_)
            throw ValidationError("SmallEntriesMpq: B entry out of [-w, w]", row_, j, -1);
          out_.col_index_[static_cast<size_t>(j)] = 0;  // marks "has a finite entry"
        }
        budget.charge(std::max(1, b.cols));
        ++row_;
      }
      if (row_ == b.rows) {
        phase_ = kAlloc;
        row_ = 0;
      }
      return;
    }
    case kAlloc: {
      for (int j = 0; j < b.cols; ++j) {
        if (out_.col_index_[static_cast<size_t>(j)] == 0) {
          out_.col_index_[static_cast<size_t>(j)] = static_cast<std::int32_t>(out_.active_cols_.size());
          out_.active_cols_.push_back(j);
        }
      }
      out_.counts_ = CountGrid(static_cast<std::int64_t>(a.rows) * out_.active_cols_.size(), out_.slots_);
      if (backend_ == Backend::kBigint) {
        // Per-entry positional encodings of B, restricted to active columns.
        std::uint64_t base = static_cast<std::uint64_t>(a.cols) + 1;
        b_enc_.assign(static_cast<size_t>(b.rows), {});
        for (int k = 0; k < b.rows; ++k) {
          b_enc_[static_cast<size_t>(k)].resize(out_.active_cols_.size());
          for (size_t jj = 0; jj < out_.active_cols_.size(); ++jj) {
            std::int64_t val = b.at(k, out_.active_cols_[jj]);
            if (finite(val))
              b_enc_[static_cast<size_t>(k)][jj] =
                  BigUint::pow(base, static_cast<std::uint64_t>(val + out_.w_));
          }
        }
        budget.charge(static_cast<std::int64_t>(b.rows) * std::max<std::int64_t>(1, out_.active_cols_.size()));
      } else {
        budget.charge(std::max(1, b.cols));
      }
      phase_ = kFill;
      row_ = 0;
      return;
    }
    case kFill: {
      std::int64_t per_row = std::max<std::int64_t>(1, static_cast<std::int64_t>(a.cols) *
                                                           std::max<size_t>(1, out_.active_cols_.size()));
      if (budget.unlimited) {
        std::int64_t first = row_;
        parallel_for(a.rows - first, per_row, [&](std::int64_t d) { fill_row(first + d); });
        row_ = a.rows;
      } else {
        while (row_ < a.rows && !budget.exhausted()) {
          fill_row(row_);
          budget.charge(per_row);
          ++row_;
        }
      }
      if (row_ == a.rows) phase_ = kFinalize;
      return;
    }
    case kFinalize: {
      out_.counts_.finalize();
      StreamHash h;
      h.put(out_.a_.content_hash());
      h.put(out_.b_.content_hash());
      h.put_i64(out_.w_);
      for (std::int32_t c : out_.col_index_) h.put_i64(c);
      out_.static_hash_ = h.value();
      budget.charge(out_.counts_.rows());
      phase_ = kDone;
      return;
    }
    default:
      return;
  }
}

void SmallEntriesMpq::Builder::fill_row(std::int64_t i) {
  Mat& a = out_.a_;
  Mat& b = out_.b_;
  size_t nact = out_.active_cols_.size();
  if (nact == 0) return;
  if (backend_ == Backend::kDirect) {
    const std::int64_t* ar = a.row(static_cast<int>(i));
    for (int k = 0; k < a.cols; ++k) {
      if (!finite(ar[k])) continue;
      std::int64_t av = ar[k];
      const std::int64_t* br = b.row(k);
      for (size_t jj = 0; jj < nact; ++jj) {
        std::int64_t bv = br[out_.active_cols_[jj]];
        if (!finite(bv)) continue;
        int slot = static_cast<int>(av + bv + 2 * out_.w_);
        out_.counts_.row_data(i * static_cast<std::int64_t>(nact) + static_cast<std::int64_t>(jj))[slot]++;
      }
    }
  } else {
    std::uint64_t base = static_cast<std::uint64_t>(a.cols) + 1;
    const std::int64_t* ar = a.row(static_cast<int>(i));
    std::vector<BigUint> a_enc(static_cast<size_t>(a.cols));
    for (int k = 0; k < a.cols; ++k)
      if (finite(ar[k])) a_enc[static_cast<size_t>(k)] = BigUint::pow(base, static_cast<std::uint64_t>(ar[k] + out_.w_));
    for (size_t jj = 0; jj < nact; ++jj) {
      BigUint acc;
      for (int k = 0; k < a.cols; ++k) {
        if (!finite(ar[k])) continue;
        const BigUint& be = b_enc_[static_cast<size_t>(k)][jj];
        if (be.is_zero()) continue;  // encodes an inf entry
        acc.add_assign(a_enc[static_cast<size_t>(k)].mul(be));
      }
      std::int32_t* out = out_.counts_.row_data(i * static_cast<std::int64_t>(nact) + static_cast<std::int64_t>(jj));
      for (int t = 0; t < out_.slots_; ++t) {
        std::uint32_t digit = acc.divmod_small(static_cast<std::uint32_t>(base));
        out[t] = static_cast<std::int32_t>(digit);
      }
      if (!acc.is_zero()) throw std::logic_error("SmallEntriesMpq: bigint decode overflow");
    }
  }
}

SmallEntriesMpq SmallEntriesMpq::Builder::finish() {
  if (phase_ != kDone) throw std::logic_error("SmallEntriesMpq::Builder::finish: build incomplete");
  return std::move(out_);
}

std::optional<std::int64_t> SmallEntriesMpq::query(int i, int j, std::span<const int> forbidden) {
  if (i < 0 || i >= a_.rows || j < 0 || j >= b_.cols)
    throw std::out_of_range("SmallEntriesMpq::query: index out of range");
  touches_ = 0;
  std::int32_t jj = col_index_[static_cast<size_t>(j)];
  if (jj < 0) return std::nullopt;  // all-inf column
  std::int64_t row = static_cast<std::int64_t>(i) * active_cols_.size() + jj;

  scratch_.assign(forbidden.begin(), forbidden.end());
  std::sort(scratch_.begin(), scratch_.end());
  scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());

  for (int k : scratch_) {
    if (k < 0 || k >= a_.cols) throw std::out_of_range("SmallEntriesMpq::query: forbidden index out of range");
    ++touches_;
    std::int64_t av = a_.at(i, k);
    std::int64_t bv = b_.at(k, j);
    if (!finite(av) || !finite(bv)) continue;
    counts_.add(row, static_cast<int>(av + bv + 2 * w_), -1);
  }
  int slot = counts_.kth_nonzero(row, 1);
  counts_.rollback();
  if (slot < 0) return std::nullopt;
  return slot - 2 * w_;
}

std::int64_t SmallEntriesMpq::count_at(int i, int j, std::int64_t value) const {
  if (i < 0 || i >= a_.rows || j < 0 || j >= b_.cols)
    throw std::out_of_range("SmallEntriesMpq::count_at: index out of range");
  if (value < -2 * w_ || value > 2 * w_)
    throw std::out_of_range("SmallEntriesMpq::count_at: value out of range");
  std::int32_t jj = col_index_[static_cast<size_t>(j)];
  if (jj < 0) return 0;
  return counts_.at(static_cast<std::int64_t>(i) * active_cols_.size() + jj, static_cast<int>(value + 2 * w_));
}

std::uint64_t SmallEntriesMpq::checksum() const { return hash_combine(static_hash_, counts_.checksum()); }

std::uint64_t SmallEntriesMpq::checksum_recompute() const {
  return hash_combine(static_hash_, counts_.checksum_recompute());
}

}  // namespace rangemode::minplus
