#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rangemode/core/occurrence_index.hpp"
#include "rangemode/core/order_sequence.hpp"
#include "rangemode/minplus/monotone.hpp"
#include "rangemode/mode/params.hpp"
#include "rangemode/mode/window_pairs.hpp"

namespace rangemode::mode {

struct ModeAnswer {
  std::uint32_t value;
  std::int64_t frequency;
};

// Frozen state taken at rebuild time. Queries that cross a node's midpoint
// are answered from the node's segment-prefix matrices through a MonotoneMpq
// (frequent values only, modified values excluded via the forbidden set);
// everything else is recounted directly. Segment boundaries are stored as
// positions into the frozen element list, whose handles are resolved against
// the live sequence at query time.
struct Snapshot {
  struct FrozenElem {
    ElementHandle handle;
    std::uint32_t value;
  };
  struct Segment {
    std::int32_t lo, hi;  // frozen positions, inclusive
  };
  struct SplitNode {
    std::int32_t lo = 0, hi = -1, mid = -1;
    std::int32_t left = -1, right = -1;  // child node ids; -1 on leaves
    bool leaf = true;
    std::vector<Segment> psegs;  // left of mid, psegs[0] adjacent (contains mid)
    std::vector<Segment> qsegs;  // right of mid
    minplus::Mat a;              // (psegs+1) x frequent: negated prefix counts
    minplus::Mat b;              // frequent x (qsegs+1)
    std::unique_ptr<minplus::MonotoneMpq> mpq;
  };

  std::vector<FrozenElem> elems;
  std::vector<std::uint32_t> frequent;  // ascending
  std::unordered_map<std::uint32_t, int> value_col;
  std::vector<SplitNode> nodes;  // nodes[0] is the root when elems is nonempty
  std::uint64_t static_hash = 0;

  bool empty() const { return elems.empty(); }
  std::uint64_t checksum() const;
  std::uint64_t checksum_recompute() const;
};

class DynamicRangeMode {
 public:
  explicit DynamicRangeMode(ModeConfig cfg);
  ~DynamicRangeMode();  // out of line: staged builder is incomplete here
  DynamicRangeMode(const DynamicRangeMode&) = delete;
  DynamicRangeMode& operator=(const DynamicRangeMode&) = delete;

  void insert(std::int64_t pos, std::uint32_t value);
  void erase(std::int64_t pos);
  // Mode of a_l..a_r with its exact frequency; value ties break low.
  // Internally journaled-and-rolled-back: observably pure.
  ModeAnswer query(std::int64_t l, std::int64_t r);

  void rebuild();  // immediate full rebuild (usable in either mode)
  // Deamortized only: advance the in-progress staged rebuild by up to
  // `budget` work units (cells); returns the unspent budget. Starts a staged
  // build if none is in progress.
  std::int64_t rebuild_step(std::int64_t budget);
  bool staged_in_progress() const { return staged_ != nullptr; }

  std::int64_t size() const { return seq_.size(); }
  const ModeConfig& config() const { return cfg_; }

  struct Stats {
    std::int64_t rebuilds = 0;
    std::int64_t staged_swaps = 0;
    std::int64_t forced_finishes = 0;
    std::int64_t mpq_queries = 0;
    std::int64_t s_budget_violations = 0;          // must stay 0
    std::int64_t rebuild_validation_failures = 0;  // must stay 0
  };
  const Stats& stats() const { return stats_; }

  std::uint64_t checksum() const;
  std::uint64_t checksum_recompute() const;
  std::uint64_t snapshot_checksum() const { return snap_.checksum(); }

  // Test hooks.
  std::optional<ModeAnswer> query_infrequent_only(std::int64_t l, std::int64_t r) const;
  bool debug_validate_window_pairs() const { return pairs_.debug_validate(); }
  bool debug_check_decomposition(std::int64_t l, std::int64_t r);
  // Build a snapshot from the current state under the given step budgets
  // (cycled; 0 means unlimited) and return its checksum, discarding it.
  std::uint64_t debug_trial_build_checksum(const std::vector<std::int64_t>& budgets);
  const Snapshot& snapshot() const { return snap_; }
  const WindowPairIndex& window_pairs() const { return pairs_; }
  const OccurrenceIndex& occurrences() const { return occ_; }

 private:
  class SnapshotBuilder;

  void mark_modified(std::uint32_t value);
  void after_mutation();
  void install(Snapshot snap, bool staged);
  void start_staged();

  // Query candidate sources; cand maps value -> exact frequency.
  void route_snapshot(std::int64_t l, std::int64_t r, std::unordered_map<std::uint32_t, std::int64_t>& cand);
  void leaf_scan(const Snapshot::SplitNode& nd, std::int64_t l, std::int64_t r,
                 std::unordered_map<std::uint32_t, std::int64_t>& cand) const;
  void crossing_query(Snapshot::SplitNode& nd, std::int64_t l, std::int64_t r,
                      std::unordered_map<std::uint32_t, std::int64_t>& cand);
  // Largest fully-covered segment prefix against [l, r]; `left` picks P or Q.
  int covered_prefix(const Snapshot::SplitNode& nd, bool left, std::int64_t l, std::int64_t r) const;
  ElementHandle first_live(std::int32_t lo, std::int32_t hi) const;  // frozen positions
  ElementHandle last_live(std::int32_t lo, std::int32_t hi) const;

  ModeConfig cfg_;
  OrderSequence seq_;
  OccurrenceIndex occ_;
  WindowPairIndex pairs_;
  Snapshot snap_;
  std::unordered_set<std::uint32_t> modified_;       // vs the serving snapshot
  std::unordered_set<std::uint32_t> modified_next_;  // vs the staged freeze point
  std::unique_ptr<SnapshotBuilder> staged_;
  std::int64_t staged_per_op_budget_ = 0;
  std::int64_t ops_since_rebuild_ = 0;
  std::uint64_t rebuild_counter_ = 0;
  Stats stats_;
  std::vector<int> s_cols_;  // scratch forbidden-column buffer
};

}  // namespace rangemode::mode
