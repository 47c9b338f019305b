#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rangemode/core/bigint.hpp"
#include "rangemode/core/build_budget.hpp"
#include "rangemode/core/grids.hpp"
#include "rangemode/minplus/matrix.hpp"

namespace rangemode::minplus {

// Min-plus query structure for a pair of matrices whose finite entries lie
// in [-w, w]. Per (i, j) it keeps the histogram of attainable sums
// a(i,k)+b(k,j) over slots [0, 4w] (slot = sum + 2w). A query masks the
// forbidden indices by journaled decrements, reads the earliest nonzero
// slot, and rolls everything back, so the structure is observably pure.
//
// Two interchangeable build backends: a direct counting triple loop and a
// positional big-integer encoding (entries mapped to powers of (cols+1) so
// one product digit-decomposes into the same histograms). They must produce
// identical tables.
class SmallEntriesMpq {
 public:
  enum class Backend { kDirect, kBigint };

  SmallEntriesMpq() = default;

  static SmallEntriesMpq build(Mat a, Mat b, std::int64_t w, Backend backend = Backend::kDirect);

  class Builder;

  // min over k not in `forbidden` of a(i,k)+b(k,j); nullopt when no finite sum.
  std::optional<std::int64_t> query(int i, int j, std::span<const int> forbidden);

  // Number of k with a(i,k)+b(k,j) == value, value in [-2w, 2w].
  std::int64_t count_at(int i, int j, std::int64_t value) const;

  int rows() const { return a_.rows; }
  int cols() const { return b_.cols; }
  int inner() const { return a_.cols; }
  std::int64_t w() const { return w_; }
  bool column_active(int j) const { return col_index_[static_cast<size_t>(j)] >= 0; }
  const Mat& a() const { return a_; }
  const Mat& b() const { return b_; }

  std::uint64_t checksum() const;
  std::uint64_t checksum_recompute() const;
  std::uint64_t last_query_touches() const { return touches_; }

 private:
  friend class Builder;

  Mat a_, b_;
  std::int64_t w_ = 0;
  int slots_ = 0;                     // 4w + 1
  std::vector<std::int32_t> col_index_;  // b column -> compact index, -1 if all-inf
  std::vector<std::int32_t> active_cols_;
  CountGrid counts_;                  // (a.rows * active) x slots
  std::uint64_t static_hash_ = 0;
  mutable std::uint64_t touches_ = 0;
  std::vector<int> scratch_;
};

class SmallEntriesMpq::Builder {
 public:
  Builder(Mat a, Mat b, std::int64_t w, Backend backend);
  bool done() const { return phase_ == kDone; }
  void step(BuildBudget& budget);
  SmallEntriesMpq finish();

 private:
  enum { kValidateA, kValidateB, kAlloc, kFill, kFinalize, kDone };
  SmallEntriesMpq out_;
  Backend backend_;
  int phase_ = kValidateA;
  std::int64_t row_ = 0;
  std::vector<std::vector<BigUint>> b_enc_;  // per k, per active column (bigint backend)
  void fill_row(std::int64_t i);
};

}  // namespace rangemode::minplus
