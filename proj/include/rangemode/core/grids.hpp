#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rangemode/core/hashing.hpp"
#include "rangemode/detail/overlay.hpp"

namespace rangemode {

// Many fixed-width count tables in one allocation ("one table per (i,j)
// pair" structures). Rows share a single journal: a query touches one row,
// rolls back everything it touched, and leaves no durable change. Build-time
// fills bypass the journal and may run row-parallel; finalize() then builds
// the overlays and the content fingerprint.
class CountGrid {
 public:
  CountGrid() = default;
  CountGrid(std::int64_t rows, int slots);

  std::int64_t rows() const { return rows_; }
  int slots() const { return slots_; }

  std::int32_t* row_data(std::int64_t row) { return cnt_.data() + row * slots_; }
  const std::int32_t* row_data(std::int64_t row) const { return cnt_.data() + row * slots_; }
  std::int32_t at(std::int64_t row, int slot) const { return cnt_[row * slots_ + slot]; }

  void finalize();  // build overlays + fingerprint from raw rows (parallel-safe)

  void add(std::int64_t row, int slot, std::int32_t delta);  // journaled
  int kth_nonzero(std::int64_t row, int k) const;            // 1-based k; -1 if none
  void rollback();
  bool journal_empty() const { return journal_.empty(); }

  std::uint64_t checksum() const { return hash_.value(); }
  std::uint64_t checksum_recompute() const;

 private:
  std::int64_t rows_ = 0;
  int slots_ = 0;
  int pow2_ = 1;
  std::vector<std::int32_t> cnt_;
  std::vector<std::int32_t> ovl_;
  struct JEntry {
    std::int64_t row;
    std::int32_t slot;
    std::int32_t delta;
  };
  std::vector<JEntry> journal_;
  XorAcc hash_;
};

// Same layout for per-row minimum tables (values with a min/argmin overlay),
// with journaled masking: set(row, slot) to +inf for the duration of a query,
// then restore. Ties in argmin resolve to the smallest slot.
class MinGrid {
 public:
  MinGrid() = default;
  MinGrid(std::int64_t rows, int slots);

  std::int64_t rows() const { return rows_; }
  int slots() const { return slots_; }
  static constexpr std::int64_t kInfValue = detail::kOverlayInf;

  std::int64_t* row_data(std::int64_t row) { return val_.data() + row * slots_; }
  std::int64_t at(std::int64_t row, int slot) const { return val_[row * slots_ + slot]; }

  void finalize();

  void mask(std::int64_t row, int slot);  // journaled set-to-inf
  std::pair<std::int64_t, int> min_slot(std::int64_t row) const;  // (value, slot); slot -1 if all inf
  void rollback();
  bool journal_empty() const { return journal_.empty(); }

  std::uint64_t checksum() const { return hash_.value(); }
  std::uint64_t checksum_recompute() const;

 private:
  std::int64_t rows_ = 0;
  int slots_ = 0;
  int pow2_ = 1;
  std::vector<std::int64_t> val_;
  std::vector<std::int64_t> ovl_;
  struct JEntry {
    std::int64_t row;
    std::int32_t slot;
    std::int64_t old;
  };
  std::vector<JEntry> journal_;
  XorAcc hash_;
};

}  // namespace rangemode
