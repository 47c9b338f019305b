#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rangemode/core/build_budget.hpp"
#include "rangemode/minplus/bucketed.hpp"
#include "rangemode/minplus/matrix.hpp"

namespace rangemode::minplus {

// Min-plus query with witness for arbitrary A against a B whose entries move
// by at most `w` within each width-`delta` column block.
//
// Preprocessing: estimate every column by its block representative, take the
// l-th smallest estimated sum per (row, block) as a threshold, then run
// `delta` sampled shift rounds. Round r re-centers A at a sampled column and
// keeps only entries within 3w of the threshold; each (i,k) is kept by at
// most one round ("covered") and served by an inner BucketedMpq. Queries
// combine three candidate sources: the rounds, the per-block list of indices
// whose estimated sum sits far below the threshold, and the per-block list of
// uncovered indices near the threshold. Results are exact for every seed;
// sampling quality affects list sizes only.
class BoundedDiffMpq {
 public:
  BoundedDiffMpq() = default;

  static BoundedDiffMpq build(Mat a, Mat b, int delta, std::int64_t w, std::int64_t l,
                              std::uint64_t seed);

  class Builder;

  struct Result {
    std::int64_t value;
    int witness;
  };

  // Exact min over k not in `forbidden`, with witness. Requires |forbidden| < l.
  std::optional<Result> query(int i, int j, std::span<const int> forbidden);

  struct Stats {
    int rounds = 0;
    int bucket_size = 0;
    std::int64_t low_entries = 0;   // far-below-threshold candidates stored
    std::int64_t near_entries = 0;  // uncovered near-threshold candidates stored
  };
  const Stats& stats() const { return stats_; }

  int rows() const { return a_.rows; }
  int cols() const { return b_.cols; }
  int inner_dim() const { return a_.cols; }
  int delta() const { return delta_; }
  std::int64_t w() const { return w_; }
  std::int64_t l() const { return l_; }
  int block_of(int j) const { return j / delta_; }
  int rep_of_block(int blk) const { return std::min((blk + 1) * delta_, b_.cols) - 1; }
  std::int64_t threshold(int i, int blk) const { return thresholds_[static_cast<size_t>(i) * nblocks_ + blk]; }
  int covered_round(int i, int k) const { return covered_round_[static_cast<size_t>(i) * a_.cols + k]; }
  const std::vector<int>& anchors() const { return anchors_; }
  const Mat& a() const { return a_; }
  const Mat& b() const { return b_; }

  std::uint64_t checksum() const;
  std::uint64_t checksum_recompute() const;

 private:
  friend class Builder;

  struct Csr {
    std::vector<std::int64_t> off;  // size rows+1
    std::vector<std::int32_t> dat;
    std::span<const std::int32_t> row(std::int64_t r) const {
      return {dat.data() + off[static_cast<size_t>(r)],
              static_cast<size_t>(off[static_cast<size_t>(r) + 1] - off[static_cast<size_t>(r)])};
    }
  };

  Mat a_, b_;
  int delta_ = 1;
  std::int64_t w_ = 1;
  std::int64_t l_ = 1;
  int rounds_ = 0;
  int bucket_p_ = 1;
  int nblocks_ = 0;
  std::uint64_t seed_ = 0;
  Mat b_est_;
  std::vector<std::int64_t> thresholds_;     // (i, block) -> l-th smallest estimated sum (kInf sentinel)
  Csr low_lists_;                            // (i, block) -> ks with estimated shift < -2w, ascending shift
  Csr near_lists_;                           // (i, block) -> uncovered ks with |estimated shift| <= 2w
  std::vector<std::int32_t> covered_round_;  // (i, k) -> round or -1
  std::vector<int> anchors_;                 // sampled column per round
  std::vector<BucketedMpq> inners_;
  Stats stats_;
  std::uint64_t static_hash_ = 0;
  std::vector<int> scratch_, sub_forbidden_;
};

class BoundedDiffMpq::Builder {
 public:
  Builder(Mat a, Mat b, int delta, std::int64_t w, std::int64_t l, std::uint64_t seed);
  bool done() const { return phase_ == kDone; }
  void step(BuildBudget& budget);
  BoundedDiffMpq finish();

 private:
  enum { kValidate, kEstimate, kThresholds, kLowLists, kRoundFill, kRoundInner, kNearLists, kFinalize, kDone };
  BoundedDiffMpq out_;
  int phase_ = kValidate;
  std::int64_t row_ = 0;
  int round_ = 0;
  Mat round_a_, round_b_;
  std::unique_ptr<BucketedMpq::Builder> inner_builder_;
  void start_round_fill();
  void fill_round_a_row(std::int64_t i);
};

// The l-th smallest elements of two pointwise w-close sequences are w-close.
// Standalone property used as its own test surface.
bool lth_smallest_close(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                        std::int64_t w, std::int64_t l);

}  // namespace rangemode::minplus
