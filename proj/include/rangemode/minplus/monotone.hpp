#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rangemode/core/build_budget.hpp"
#include "rangemode/core/grids.hpp"
#include "rangemode/minplus/bounded_diff.hpp"
#include "rangemode/minplus/matrix.hpp"
#include "rangemode/omega.hpp"

namespace rangemode::minplus {

// Min-plus query with witness for arbitrary A against a monotone B: every
// row of B is non-increasing and consecutive column sums drop by at most
// `drop_bound`. Rows that fall by more than w = delta^2 inside a width-delta
// column block are clipped to a finite sentinel (making the matrix
// block-bounded-difference for the inner structure); their true sums live in
// sparse per-(i, j) exception tables consulted alongside the inner query.
class MonotoneMpq {
 public:
  MonotoneMpq() = default;

  static MonotoneMpq build(Mat a, Mat b, std::int64_t l, std::int64_t drop_bound,
                           const OmegaFn& omega, std::uint64_t seed);
  static MonotoneMpq build(Mat a, Mat b, std::int64_t l, std::int64_t drop_bound, std::uint64_t seed) {
    return build(std::move(a), std::move(b), l, drop_bound, omega_upper_bound, seed);
  }

  class Builder;

  struct Result {
    std::int64_t value;
    int witness;
  };

  std::optional<Result> query(int i, int j, std::span<const int> forbidden);

  int rows() const { return a_.rows; }
  int cols() const { return b_.cols; }
  int inner_dim() const { return a_.cols; }
  int delta() const { return delta_; }
  std::int64_t w() const { return w_; }
  std::int64_t clip_sentinel() const { return m_; }
  std::int64_t l() const { return l_; }
  const BoundedDiffMpq& inner() const { return inner_; }
  const std::vector<std::int32_t>& clipped_rows(int block) const {
    return clipped_by_block_[static_cast<size_t>(block)];
  }
  int block_count() const { return nblocks_; }
  const Mat& a() const { return a_; }
  const Mat& b() const { return b_; }

  std::uint64_t checksum() const;
  std::uint64_t checksum_recompute() const;

 private:
  friend class Builder;

  struct ExcCol {
    std::vector<std::int32_t> keys;  // clipped ks, ascending
    MinGrid grid;                    // rows = a.rows, slots = keys.size()
  };

  Mat a_, b_;
  std::int64_t l_ = 1;
  std::int64_t drop_bound_ = 1;
  int delta_ = 1;
  std::int64_t w_ = 1;
  std::int64_t m_ = 0;
  int nblocks_ = 0;
  std::vector<std::vector<std::int32_t>> clipped_by_block_;
  std::map<int, ExcCol> exceptions_;  // by column
  BoundedDiffMpq inner_;
  std::uint64_t static_hash_ = 0;
  std::vector<int> scratch_;
};

class MonotoneMpq::Builder {
 public:
  Builder(Mat a, Mat b, std::int64_t l, std::int64_t drop_bound, const OmegaFn& omega,
          std::uint64_t seed);
  bool done() const { return phase_ == kDone; }
  void step(BuildBudget& budget);
  MonotoneMpq finish();

 private:
  enum { kValidate, kClip, kExceptions, kInner, kFinalize, kDone };
  MonotoneMpq out_;
  int phase_ = kValidate;
  std::int64_t row_ = 0;
  std::uint64_t seed_ = 0;
  Mat b_hat_;
  std::vector<std::int64_t> col_sums_;
  std::unique_ptr<BoundedDiffMpq::Builder> inner_builder_;
};

}  // namespace rangemode::minplus
