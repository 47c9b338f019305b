#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rangemode/core/build_budget.hpp"
#include "rangemode/core/grids.hpp"
#include "rangemode/minplus/matrix.hpp"
#include "rangemode/minplus/small_entries.hpp"

namespace rangemode::minplus {

// Min-plus query with witness for a small-entry A (finite entries in
// [-w, w]) against an arbitrary integer B. Each column of B is rank-sorted
// into buckets of p entries (last bucket may be ragged). A bucket whose
// value spread is <= 2w is "small" and served by a shifted SmallEntriesMpq;
// large buckets are served by scanning the two lowest candidate buckets,
// which is enough: any large bucket between two candidates separates them
// by more than the 2w entry slack, so later buckets can never win.
//
// Tie-breaking is deterministic: (value, bucket index, k within the bucket).
class BucketedMpq {
 public:
  BucketedMpq() = default;

  static BucketedMpq build(Mat a, Mat b, std::int64_t w, int p);

  class Builder;

  struct Result {
    std::int64_t value;
    int witness;
  };

  std::optional<Result> query(int i, int j, std::span<const int> forbidden);

  // Exhaustive validation of the bucket domination argument on the stored
  // matrices; violations must be empty on an uncorrupted structure.
  struct Violation {
    int i, j, l1, l2, l3;
  };
  struct Diagnostics {
    std::int64_t checked = 0;
    std::vector<Violation> violations;
  };
  Diagnostics self_check(std::int64_t max_violations = 16) const;

  // Test hook: corrupt the stored bucket bounds so self_check must trip.
  void debug_override_bucket_bounds(int j, int bucket, std::int64_t lo, std::int64_t hi);

  int rows() const { return a_.rows; }
  int cols() const { return b_.cols; }
  int inner() const { return a_.cols; }
  int bucket_size() const { return p_; }
  int bucket_count() const { return nb_; }
  bool bucket_small(int j, int bucket) const { return small_[static_cast<size_t>(j) * nb_ + bucket] != 0; }
  std::int64_t bucket_lo(int j, int bucket) const { return lo_[static_cast<size_t>(j) * nb_ + bucket]; }
  std::int64_t bucket_hi(int j, int bucket) const { return hi_[static_cast<size_t>(j) * nb_ + bucket]; }
  // k indices of a bucket, in rank order.
  std::span<const std::int32_t> bucket_members(int j, int bucket) const;
  std::int64_t t_large_count(int i, int j, int bucket) const {
    return t_large_.at(static_cast<std::int64_t>(i) * b_.cols + j, bucket);
  }
  std::int64_t t_small_value(int i, int j, int bucket) const {
    return t_small_.at(static_cast<std::int64_t>(i) * b_.cols + j, bucket);
  }
  const Mat& a() const { return a_; }
  const Mat& b() const { return b_; }

  std::uint64_t checksum() const;
  std::uint64_t checksum_recompute() const;
  std::uint64_t last_query_touches() const { return touches_; }

 private:
  friend class Builder;

  Mat a_, b_;
  std::int64_t w_ = 0;
  int p_ = 1;
  int nb_ = 0;
  std::vector<std::int32_t> order_;      // per column: k by ascending (value, k)
  std::vector<std::int32_t> bucket_of_;  // per column: bucket of each k
  std::vector<std::int64_t> lo_, hi_;    // per (column, bucket)
  std::vector<std::uint8_t> small_;      // per (column, bucket)
  std::vector<std::unique_ptr<SmallEntriesMpq>> inner_;  // per bucket; null if never small
  MinGrid t_small_;    // per (i, j): best sum per small bucket (unshifted)
  CountGrid t_large_;  // per (i, j): finite-A members per large bucket
  std::uint64_t static_hash_ = 0;
  mutable std::uint64_t touches_ = 0;
  std::vector<int> scratch_;

  std::int64_t grid_row(int i, int j) const { return static_cast<std::int64_t>(i) * b_.cols + j; }
};

class BucketedMpq::Builder {
 public:
  Builder(Mat a, Mat b, std::int64_t w, int p);
  bool done() const { return phase_ == kDone; }
  void step(BuildBudget& budget);
  BucketedMpq finish();

 private:
  enum { kValidate, kBuckets, kInnerCreate, kInner, kTables, kFinalize, kDone };
  BucketedMpq out_;
  int phase_ = kValidate;
  std::int64_t row_ = 0;
  size_t inner_idx_ = 0;
  std::vector<std::pair<int, std::unique_ptr<SmallEntriesMpq::Builder>>> inner_builders_;
  void fill_table_row(std::int64_t i);
};

}  // namespace rangemode::minplus
