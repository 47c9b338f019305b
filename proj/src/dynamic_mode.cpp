#include "rangemode/mode/dynamic_mode.hpp"

#include <algorithm>
#include <stdexcept>

#include "rangemode/core/build_budget.hpp"
#include "rangemode/core/parallel.hpp"

namespace rangemode::mode {

namespace {

std::uint64_t snapshot_static_hash(const Snapshot& s) {
  StreamHash h;
  h.put(s.elems.size());
  for (const auto& e : s.elems) {
    h.put(e.handle);
    h.put(e.value);
  }
  for (auto v : s.frequent) h.put(v);
  h.put(s.nodes.size());
  for (const auto& nd : s.nodes) {
    h.put_i64(nd.lo);
    h.put_i64(nd.hi);
    h.put_i64(nd.mid);
    h.put_i64(nd.left);
    h.put_i64(nd.right);
    h.put_i64(nd.leaf ? 1 : 0);
    for (const auto& sg : nd.psegs) {
      h.put_i64(sg.lo);
      h.put_i64(sg.hi);
    }
    for (const auto& sg : nd.qsegs) {
      h.put_i64(sg.lo);
      h.put_i64(sg.hi);
    }
    h.put(nd.a.content_hash());
    h.put(nd.b.content_hash());
  }
  return h.value();
}

}  // namespace

std::uint64_t Snapshot::checksum() const {
  std::uint64_t h = static_hash;
  for (const auto& nd : nodes) h = hash_combine(h, nd.mpq ? nd.mpq->checksum() : 0);
  return h;
}

std::uint64_t Snapshot::checksum_recompute() const {
  std::uint64_t h = snapshot_static_hash(*this);
  for (const auto& nd : nodes) h = hash_combine(h, nd.mpq ? nd.mpq->checksum_recompute() : 0);
  return h;
}

// ---------------------------------------------------------------------------
// Staged snapshot construction. The frozen element list and the node plan are
// made eagerly (O(len)); matrix fills and the per-node MonotoneMpq builds are
// resumable. A one-shot rebuild is the same builder run with no budget cap,
// so staged and immediate rebuilds produce bit-identical snapshots.

class DynamicRangeMode::SnapshotBuilder {
 public:
  explicit SnapshotBuilder(DynamicRangeMode& dm)
      : cfg_(dm.cfg_), stats_(&dm.stats_), seed_base_(mix64(dm.cfg_.seed ^ (dm.rebuild_counter_ + 1) * 0x9e3779b97f4a7c15ULL)) {
    auto handles = dm.seq_.to_handles();
    snap_.elems.reserve(handles.size());
    std::unordered_map<std::uint32_t, std::int64_t> counts;
    for (ElementHandle h : handles) {
      std::uint32_t v = dm.seq_.value_of(h);
      snap_.elems.push_back(Snapshot::FrozenElem{h, v});
      ++counts[v];
    }
    for (const auto& [v, cnt] : counts)
      if (cnt * cfg_.T1 > cfg_.capacity) snap_.frequent.push_back(v);
    std::sort(snap_.frequent.begin(), snap_.frequent.end());
    for (size_t i = 0; i < snap_.frequent.size(); ++i)
      snap_.value_col.emplace(snap_.frequent[i], static_cast<int>(i));
    if (!snap_.elems.empty()) plan(0, static_cast<std::int32_t>(snap_.elems.size()) - 1);
    estimate_ += static_cast<std::int64_t>(snap_.elems.size());
  }

  bool done() const { return phase_ == kDone; }
  std::int64_t estimated_total() const { return estimate_; }

  void step(BuildBudget& budget) {
    switch (phase_) {
      case kMatrices: {
        while (node_idx_ < snap_.nodes.size() && !budget.exhausted()) {
          if (!fill_matrices_chunk(snap_.nodes[node_idx_], budget)) return;
          ++node_idx_;
          row_ = 0;
          filling_b_ = false;
        }
        if (node_idx_ == snap_.nodes.size()) {
          phase_ = kMpq;
          node_idx_ = 0;
        }
        return;
      }
      case kMpq: {
        while (node_idx_ < snap_.nodes.size() && !budget.exhausted()) {
          Snapshot::SplitNode& nd = snap_.nodes[node_idx_];
          if (nd.leaf || snap_.frequent.empty()) {
            ++node_idx_;
            continue;
          }
          if (!mpq_builder_) {
            validate_node(nd);
            mpq_builder_ = std::make_unique<minplus::MonotoneMpq::Builder>(
                nd.a, nd.b, std::max<std::int64_t>(1, cfg_.T2), std::max<std::int64_t>(1, cfg_.T3),
                OmegaFn(omega_upper_bound), hash_combine(seed_base_, node_idx_));
          }
          mpq_builder_->step(budget);
          if (mpq_builder_->done()) {
            nd.mpq = std::make_unique<minplus::MonotoneMpq>(mpq_builder_->finish());
            mpq_builder_.reset();
            ++node_idx_;
          }
        }
        if (node_idx_ == snap_.nodes.size()) phase_ = kFinalize;
        return;
      }
      case kFinalize: {
        snap_.static_hash = snapshot_static_hash(snap_);
        budget.charge(static_cast<std::int64_t>(snap_.elems.size()));
        phase_ = kDone;
        return;
      }
      default:
        return;
    }
  }

  Snapshot take() {
    if (phase_ != kDone) throw std::logic_error("SnapshotBuilder::take: build incomplete");
    return std::move(snap_);
  }

 private:
  enum { kMatrices, kMpq, kFinalize, kDone };

  std::int32_t plan(std::int32_t lo, std::int32_t hi) {
    auto id = static_cast<std::int32_t>(snap_.nodes.size());
    snap_.nodes.emplace_back();
    {
      Snapshot::SplitNode& nd = snap_.nodes.back();
      nd.lo = lo;
      nd.hi = hi;
    }
    std::int64_t span = hi - lo + 1;
    if (span <= 2 * cfg_.T3) {
      estimate_ += span;
      return id;  // leaf: answered by pure scan
    }
    std::int32_t mid = lo + static_cast<std::int32_t>((span - 1) / 2);
    std::vector<Snapshot::Segment> psegs, qsegs;
    for (std::int64_t end = mid; end >= lo; end -= cfg_.T3)
      psegs.push_back(Snapshot::Segment{static_cast<std::int32_t>(std::max<std::int64_t>(lo, end - cfg_.T3 + 1)),
                                        static_cast<std::int32_t>(end)});
    for (std::int64_t start = mid + 1; start <= hi; start += cfg_.T3)
      qsegs.push_back(Snapshot::Segment{static_cast<std::int32_t>(start),
                                        static_cast<std::int32_t>(std::min<std::int64_t>(hi, start + cfg_.T3 - 1))});
    auto c = static_cast<std::int64_t>(snap_.frequent.size());
    {
      Snapshot::SplitNode& nd = snap_.nodes[static_cast<size_t>(id)];
      nd.leaf = false;
      nd.mid = mid;
      nd.psegs = std::move(psegs);
      nd.qsegs = std::move(qsegs);
      if (c > 0) {
        nd.a = minplus::Mat(static_cast<int>(nd.psegs.size()) + 1, static_cast<int>(c), 0);
        nd.b = minplus::Mat(static_cast<int>(c), static_cast<int>(nd.qsegs.size()) + 1, 0);
        estimate_ += (static_cast<std::int64_t>(nd.psegs.size() + nd.qsegs.size()) + 2) * c + span +
                     4 * static_cast<std::int64_t>(nd.psegs.size() + 1) *
                         static_cast<std::int64_t>(nd.qsegs.size() + 1) * c;
      } else {
        estimate_ += span;
      }
    }
    std::int32_t left = plan(lo, mid);
    std::int32_t right = plan(mid + 1, hi);
    snap_.nodes[static_cast<size_t>(id)].left = left;
    snap_.nodes[static_cast<size_t>(id)].right = right;
    return id;
  }

  // Count frozen occurrences of frequent values within a segment.
  void count_segment(const Snapshot::Segment& seg, std::vector<std::int64_t>& cnt) const {
    std::fill(cnt.begin(), cnt.end(), 0);
    for (std::int32_t p = seg.lo; p <= seg.hi; ++p) {
      auto it = snap_.value_col.find(snap_.elems[static_cast<size_t>(p)].value);
      if (it != snap_.value_col.end()) ++cnt[static_cast<size_t>(it->second)];
    }
  }

  // Returns true when this node's matrices are complete.
  bool fill_matrices_chunk(Snapshot::SplitNode& nd, BuildBudget& budget) {
    if (nd.leaf || snap_.frequent.empty()) return true;
    auto c = static_cast<std::int64_t>(snap_.frequent.size());
    std::vector<std::int64_t> cnt(static_cast<size_t>(c));
    auto m = static_cast<std::int64_t>(nd.psegs.size());
    auto mq = static_cast<std::int64_t>(nd.qsegs.size());
    while (!budget.exhausted()) {
      if (!filling_b_) {
        if (row_ >= m) {
          filling_b_ = true;
          row_ = 0;
          continue;
        }
        // Row x+1 of A: negated counts over the first x+1 left segments.
        const Snapshot::Segment& seg = nd.psegs[static_cast<size_t>(row_)];
        count_segment(seg, cnt);
        for (std::int64_t k = 0; k < c; ++k)
          nd.a.at(static_cast<int>(row_) + 1, static_cast<int>(k)) =
              nd.a.at(static_cast<int>(row_), static_cast<int>(k)) - cnt[static_cast<size_t>(k)];
        budget.charge(seg.hi - seg.lo + 1 + c);
        ++row_;
      } else {
        if (row_ >= mq) return true;
        const Snapshot::Segment& seg = nd.qsegs[static_cast<size_t>(row_)];
        count_segment(seg, cnt);
        for (std::int64_t k = 0; k < c; ++k)
          nd.b.at(static_cast<int>(k), static_cast<int>(row_) + 1) =
              nd.b.at(static_cast<int>(k), static_cast<int>(row_)) - cnt[static_cast<size_t>(k)];
        budget.charge(seg.hi - seg.lo + 1 + c);
        ++row_;
      }
    }
    return !filling_b_ ? false : row_ >= mq;
  }

  void validate_node(const Snapshot::SplitNode& nd) {
    for (int k = 0; k < nd.b.rows; ++k)
      for (int j = 0; j + 1 < nd.b.cols; ++j)
        if (nd.b.at(k, j) < nd.b.at(k, j + 1)) {
          ++stats_->rebuild_validation_failures;
          return;
        }
    for (int j = 0; j + 1 < nd.b.cols; ++j) {
      std::int64_t drop = 0;
      for (int k = 0; k < nd.b.rows; ++k) drop += nd.b.at(k, j) - nd.b.at(k, j + 1);
      if (drop > cfg_.T3) {
        ++stats_->rebuild_validation_failures;
        return;
      }
    }
  }

  const ModeConfig cfg_;
  Stats* stats_;
  std::uint64_t seed_base_;
  Snapshot snap_;
  int phase_ = kMatrices;
  size_t node_idx_ = 0;
  std::int64_t row_ = 0;
  bool filling_b_ = false;
  std::unique_ptr<minplus::MonotoneMpq::Builder> mpq_builder_;
  std::int64_t estimate_ = 0;
};

// ---------------------------------------------------------------------------

DynamicRangeMode::DynamicRangeMode(ModeConfig cfg)
    : cfg_(cfg),
      occ_(&seq_),
      pairs_(&seq_, &occ_, static_cast<int>((cfg.capacity + cfg.T1 - 1) / cfg.T1)) {
  if (cfg_.capacity < 1) throw std::invalid_argument("DynamicRangeMode: capacity must be positive");
  if (cfg_.T1 < 1 || cfg_.T2 < 1 || cfg_.T3 < 1)
    throw std::invalid_argument("DynamicRangeMode: T1, T2, T3 must be >= 1");
}

DynamicRangeMode::~DynamicRangeMode() = default;

void DynamicRangeMode::mark_modified(std::uint32_t value) {
  modified_.insert(value);
  if (staged_) modified_next_.insert(value);
}

void DynamicRangeMode::insert(std::int64_t pos, std::uint32_t value) {
  if (seq_.size() >= cfg_.capacity) throw std::length_error("DynamicRangeMode::insert: capacity exceeded");
  ElementHandle h = seq_.insert(pos, value);
  pairs_.on_insert(h);
  mark_modified(value);
  after_mutation();
}

void DynamicRangeMode::erase(std::int64_t pos) {
  if (seq_.size() == 0) throw std::out_of_range("DynamicRangeMode::erase: empty sequence");
  if (pos < 1 || pos > seq_.size()) throw std::out_of_range("DynamicRangeMode::erase: position out of range");
  ElementHandle h = seq_.select(pos);
  std::uint32_t value = seq_.value_of(h);
  pairs_.on_erase(h);
  seq_.erase_handle(h);
  mark_modified(value);
  after_mutation();
}

void DynamicRangeMode::after_mutation() {
  ++ops_since_rebuild_;
  if (!cfg_.deamortize) {
    if (static_cast<std::int64_t>(modified_.size()) >= cfg_.T2) rebuild();
    return;
  }
  if (!staged_ && static_cast<std::int64_t>(modified_.size()) >= (cfg_.T2 + 1) / 2) start_staged();
  if (!staged_) return;
  BuildBudget budget = BuildBudget::limit(staged_per_op_budget_);
  while (!staged_->done() && !budget.exhausted()) staged_->step(budget);
  if (staged_->done()) {
    install(staged_->take(), true);
    return;
  }
  if (static_cast<std::int64_t>(modified_.size()) >= cfg_.T2) {
    // The modified set would outgrow the query budget of the serving
    // snapshot; finish the staged build now.
    BuildBudget inf = BuildBudget::infinite();
    while (!staged_->done()) staged_->step(inf);
    ++stats_.forced_finishes;
    install(staged_->take(), true);
  }
}

void DynamicRangeMode::start_staged() {
  modified_next_.clear();
  staged_ = std::make_unique<SnapshotBuilder>(*this);
  staged_per_op_budget_ =
      std::max<std::int64_t>(4096, 2 * staged_->estimated_total() / std::max<std::int64_t>(1, cfg_.T2));
}

void DynamicRangeMode::install(Snapshot snap, bool staged) {
  snap_ = std::move(snap);
  if (staged) {
    modified_ = std::move(modified_next_);
    ++stats_.staged_swaps;
  } else {
    modified_.clear();
    ++stats_.rebuilds;
  }
  modified_next_.clear();
  staged_.reset();
  ops_since_rebuild_ = 0;
  ++rebuild_counter_;
}

void DynamicRangeMode::rebuild() {
  staged_.reset();
  SnapshotBuilder builder(*this);
  BuildBudget inf = BuildBudget::infinite();
  while (!builder.done()) builder.step(inf);
  install(builder.take(), false);
}

std::int64_t DynamicRangeMode::rebuild_step(std::int64_t budget) {
  if (!cfg_.deamortize) throw std::logic_error("DynamicRangeMode::rebuild_step: deamortize flag not set");
  if (budget < 1) throw std::invalid_argument("DynamicRangeMode::rebuild_step: budget must be >= 1");
  if (!staged_) start_staged();
  BuildBudget bb = BuildBudget::limit(budget);
  while (!staged_->done() && !bb.exhausted()) staged_->step(bb);
  if (staged_->done()) install(staged_->take(), true);
  return std::max<std::int64_t>(0, bb.remaining);
}

std::uint64_t DynamicRangeMode::debug_trial_build_checksum(const std::vector<std::int64_t>& budgets) {
  SnapshotBuilder builder(*this);
  size_t x = 0;
  while (!builder.done()) {
    std::int64_t b = budgets.empty() ? 0 : budgets[x++ % budgets.size()];
    BuildBudget bb = b <= 0 ? BuildBudget::infinite() : BuildBudget::limit(b);
    builder.step(bb);
    if (b > 0)
      while (!builder.done() && !bb.exhausted()) builder.step(bb);
  }
  Snapshot snap = builder.take();
  return snap.checksum();
}

// --------------------------------------------------------------------------
// Queries.

ElementHandle DynamicRangeMode::first_live(std::int32_t lo, std::int32_t hi) const {
  for (std::int32_t p = lo; p <= hi; ++p) {
    ElementHandle h = snap_.elems[static_cast<size_t>(p)].handle;
    if (seq_.alive(h)) return h;
  }
  return kNullHandle;
}

ElementHandle DynamicRangeMode::last_live(std::int32_t lo, std::int32_t hi) const {
  for (std::int32_t p = hi; p >= lo; --p) {
    ElementHandle h = snap_.elems[static_cast<size_t>(p)].handle;
    if (seq_.alive(h)) return h;
  }
  return kNullHandle;
}

int DynamicRangeMode::covered_prefix(const Snapshot::SplitNode& nd, bool left, std::int64_t l,
                                     std::int64_t r) const {
  const auto& segs = left ? nd.psegs : nd.qsegs;
  int covered = 0;
  for (size_t a = 0; a < segs.size(); ++a) {
    if (left) {
      ElementHandle h = first_live(segs[a].lo, segs[a].hi);
      if (h != kNullHandle && seq_.rank(h) < l) break;
    } else {
      ElementHandle h = last_live(segs[a].lo, segs[a].hi);
      if (h != kNullHandle && seq_.rank(h) > r) break;
    }
    covered = static_cast<int>(a) + 1;
  }
  return covered;
}

void DynamicRangeMode::leaf_scan(const Snapshot::SplitNode& nd, std::int64_t l, std::int64_t r,
                                 std::unordered_map<std::uint32_t, std::int64_t>& cand) const {
  std::unordered_map<std::uint32_t, std::int64_t> local;
  for (std::int32_t p = nd.lo; p <= nd.hi; ++p) {
    const auto& e = snap_.elems[static_cast<size_t>(p)];
    if (!seq_.alive(e.handle)) continue;
    std::int64_t rk = seq_.rank(e.handle);
    if (rk < l || rk > r) continue;
    if (modified_.count(e.value)) continue;  // exact count comes from the recount path
    ++local[e.value];
  }
  for (const auto& [v, cnt] : local) {
    auto& slot = cand[v];
    slot = std::max(slot, cnt);
  }
}

void DynamicRangeMode::crossing_query(Snapshot::SplitNode& nd, std::int64_t l, std::int64_t r,
                                      std::unordered_map<std::uint32_t, std::int64_t>& cand) {
  int ci = covered_prefix(nd, true, l, r);
  int cj = covered_prefix(nd, false, l, r);

  // First uncovered segment on each side holds every in-range element that
  // is outside the covered region; scan it and recount distinct values.
  std::unordered_set<std::uint32_t> recounted;
  auto scan_partial = [&](const Snapshot::Segment& seg) {
    for (std::int32_t p = seg.lo; p <= seg.hi; ++p) {
      const auto& e = snap_.elems[static_cast<size_t>(p)];
      if (!seq_.alive(e.handle)) continue;
      std::int64_t rk = seq_.rank(e.handle);
      if (rk < l || rk > r) continue;
      if (modified_.count(e.value)) continue;
      if (!recounted.insert(e.value).second) continue;
      std::int64_t cnt = occ_.count_in_range(e.value, l, r);
      auto& slot = cand[e.value];
      slot = std::max(slot, cnt);
    }
  };
  if (ci < static_cast<int>(nd.psegs.size())) scan_partial(nd.psegs[static_cast<size_t>(ci)]);
  if (cj < static_cast<int>(nd.qsegs.size())) scan_partial(nd.qsegs[static_cast<size_t>(cj)]);

  if (!nd.mpq || (ci == 0 && cj == 0)) return;
  s_cols_.clear();
  for (std::uint32_t v : modified_) {
    auto it = snap_.value_col.find(v);
    if (it != snap_.value_col.end()) s_cols_.push_back(it->second);
  }
  if (static_cast<std::int64_t>(s_cols_.size()) >= std::max<std::int64_t>(1, cfg_.T2)) {
    ++stats_.s_budget_violations;  // never expected; skip rather than corrupt
    return;
  }
  ++stats_.mpq_queries;
  auto res = nd.mpq->query(ci, cj, s_cols_);
  if (res) {
    std::uint32_t v = snap_.frequent[static_cast<size_t>(res->witness)];
    auto cnt = occ_.count_in_range(v, l, r);
    auto& slot = cand[v];
    slot = std::max(slot, cnt);
  }
}

void DynamicRangeMode::route_snapshot(std::int64_t l, std::int64_t r,
                                      std::unordered_map<std::uint32_t, std::int64_t>& cand) {
  if (snap_.empty()) return;
  std::int32_t node = 0;
  for (;;) {
    Snapshot::SplitNode& nd = snap_.nodes[static_cast<size_t>(node)];
    if (nd.leaf) {
      leaf_scan(nd, l, r, cand);
      return;
    }
    ElementHandle ll = last_live(nd.lo, nd.mid);
    ElementHandle fr = first_live(nd.mid + 1, nd.hi);
    if (fr == kNullHandle) {
      node = nd.left;
      continue;
    }
    if (ll == kNullHandle) {
      node = nd.right;
      continue;
    }
    std::int64_t rank_ll = seq_.rank(ll);
    std::int64_t rank_fr = seq_.rank(fr);
    bool in_left = r < rank_fr;    // nothing of the right half is inside [l, r]
    bool in_right = l > rank_ll;   // nothing of the left half is inside
    if (in_left && in_right) return;  // no live snapshot element in range at all
    if (in_left) {
      node = nd.left;
      continue;
    }
    if (in_right) {
      node = nd.right;
      continue;
    }
    crossing_query(nd, l, r, cand);
    return;
  }
}

ModeAnswer DynamicRangeMode::query(std::int64_t l, std::int64_t r) {
  if (seq_.size() == 0) throw std::out_of_range("DynamicRangeMode::query: empty sequence");
  if (l < 1 || r > seq_.size() || l > r)
    throw std::out_of_range("DynamicRangeMode::query: range out of bounds");

  std::unordered_map<std::uint32_t, std::int64_t> cand;

  // Window pairs: exact whenever the mode is low-frequency.
  if (auto bw = pairs_.best_window(l, r)) {
    std::uint32_t v = seq_.value_of(bw->first);
    auto& slot = cand[v];
    slot = std::max(slot, bw->second);
  }

  // Values touched since the snapshot: recount directly.
  for (std::uint32_t v : modified_) {
    std::int64_t cnt = occ_.count_in_range(v, l, r);
    if (cnt > 0) {
      auto& slot = cand[v];
      slot = std::max(slot, cnt);
    }
  }

  route_snapshot(l, r, cand);

  ModeAnswer best{0, 0};
  bool have = false;
  for (const auto& [v, f] : cand) {
    if (!have || f > best.frequency || (f == best.frequency && v < best.value)) {
      best = ModeAnswer{v, f};
      have = true;
    }
  }
  if (!have) throw std::logic_error("DynamicRangeMode::query: no candidate produced");
  return best;
}

std::optional<ModeAnswer> DynamicRangeMode::query_infrequent_only(std::int64_t l, std::int64_t r) const {
  auto bw = pairs_.best_window(l, r);
  if (!bw) return std::nullopt;
  return ModeAnswer{seq_.value_of(bw->first), bw->second};
}

bool DynamicRangeMode::debug_check_decomposition(std::int64_t l, std::int64_t r) {
  if (snap_.empty()) return true;
  // Mirror the routing walk, then account for every live snapshot element.
  std::int32_t node = 0;
  for (;;) {
    const Snapshot::SplitNode& nd = snap_.nodes[static_cast<size_t>(node)];
    auto live_in_range_outside = [&](std::int32_t lo, std::int32_t hi) {
      for (size_t p = 0; p < snap_.elems.size(); ++p) {
        if (static_cast<std::int32_t>(p) >= lo && static_cast<std::int32_t>(p) <= hi) continue;
        const auto& e = snap_.elems[p];
        if (!seq_.alive(e.handle)) continue;
        std::int64_t rk = seq_.rank(e.handle);
        if (rk >= l && rk <= r) return true;
      }
      return false;
    };
    if (nd.leaf) return !live_in_range_outside(nd.lo, nd.hi);
    ElementHandle ll = last_live(nd.lo, nd.mid);
    ElementHandle fr = first_live(nd.mid + 1, nd.hi);
    if (fr == kNullHandle) {
      node = nd.left;
      continue;
    }
    if (ll == kNullHandle) {
      node = nd.right;
      continue;
    }
    std::int64_t rank_ll = seq_.rank(ll);
    std::int64_t rank_fr = seq_.rank(fr);
    if (r < rank_fr && l > rank_ll) return !live_in_range_outside(1, 0);
    if (r < rank_fr) {
      node = nd.left;
      continue;
    }
    if (l > rank_ll) {
      node = nd.right;
      continue;
    }
    // Crossing node: every live in-range element must be in the covered
    // prefix segments or in the first uncovered segment of its side.
    if (live_in_range_outside(nd.lo, nd.hi)) return false;
    int ci = covered_prefix(nd, true, l, r);
    int cj = covered_prefix(nd, false, l, r);
    std::int32_t cov_lo = ci > 0 ? nd.psegs[static_cast<size_t>(ci - 1)].lo : nd.mid + 1;
    std::int32_t cov_hi = cj > 0 ? nd.qsegs[static_cast<size_t>(cj - 1)].hi : nd.mid;
    for (std::int32_t p = nd.lo; p <= nd.hi; ++p) {
      const auto& e = snap_.elems[static_cast<size_t>(p)];
      if (!seq_.alive(e.handle)) continue;
      std::int64_t rk = seq_.rank(e.handle);
      if (rk < l || rk > r) continue;
      bool in_covered = p >= cov_lo && p <= cov_hi;
      bool in_partial =
          (ci < static_cast<int>(nd.psegs.size()) && p >= nd.psegs[static_cast<size_t>(ci)].lo &&
           p <= nd.psegs[static_cast<size_t>(ci)].hi) ||
          (cj < static_cast<int>(nd.qsegs.size()) && p >= nd.qsegs[static_cast<size_t>(cj)].lo &&
           p <= nd.qsegs[static_cast<size_t>(cj)].hi);
      if (!in_covered && !in_partial) return false;
    }
    return true;
  }
}

std::uint64_t DynamicRangeMode::checksum() const {
  std::uint64_t h = hash_combine(seq_.content_hash(), occ_.content_hash());
  h = hash_combine(h, pairs_.content_hash());
  h = hash_combine(h, snap_.checksum());
  std::uint64_t ms = 0;
  for (std::uint32_t v : modified_) ms ^= mix64(v + 0x1234567ULL);
  h = hash_combine(h, ms);
  return h;
}

std::uint64_t DynamicRangeMode::checksum_recompute() const {
  std::uint64_t h = hash_combine(seq_.content_hash(), occ_.content_hash());
  h = hash_combine(h, pairs_.content_hash());
  h = hash_combine(h, snap_.checksum_recompute());
  std::uint64_t ms = 0;
  for (std::uint32_t v : modified_) ms ^= mix64(v + 0x1234567ULL);
  h = hash_combine(h, ms);
  return h;
}

}  // namespace rangemode::mode
