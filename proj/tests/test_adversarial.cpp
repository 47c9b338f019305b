// Boundary and tie-heavy instances: constant matrices, spreads exactly at
// the small/large bucket cutoff, degenerate dimensions, and hostile
// operation patterns for the dynamic structure.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "rangemode/harness/naive_mode.hpp"
#include "rangemode/harness/oracles.hpp"
#include "rangemode/minplus/bounded_diff.hpp"
#include "rangemode/minplus/bucketed.hpp"
#include "rangemode/minplus/monotone.hpp"
#include "rangemode/minplus/small_entries.hpp"
#include "rangemode/mode/dynamic_mode.hpp"
#include "test_util.hpp"

using namespace rangemode;
using namespace rangemode::minplus;
using rangemode::harness::NaiveMode;
using rangemode::mode::DynamicRangeMode;
using rangemode::mode::ModeConfig;
using testutil::random_subset;

namespace {

template <class Query>
void agree_with_oracle(const Mat& a, const Mat& b, int i, int j, const std::vector<int>& s,
                       Query&& query) {
  auto expect = harness::oracle_minplus(a, b, i, j, s);
  auto got = query(i, j, s);
  if (!expect) {
    REQUIRE_FALSE(got.has_value());
    return;
  }
  REQUIRE(got.has_value());
  CHECK(got->first == expect->first);
  if (got->second >= 0) {
    CHECK(a.at(i, got->second) + b.at(got->second, j) == got->first);
    for (int k : s) CHECK(k != got->second);
  }
}

}  // namespace

TEST_CASE("all-constant matrices: every candidate ties") {
  Rng rng(1);
  int n = 6, c = 9;
  Mat a(n, c, 0);
  Mat bz(c, n, 0);

  auto small = SmallEntriesMpq::build(a, bz, 1);
  auto bucketed = BucketedMpq::build(a, bz, 1, 2);
  auto bd = BoundedDiffMpq::build(a, bz, 2, 1, 5, 3);
  auto mono = MonotoneMpq::build(a, bz, 5, 1, 3);

  for (int trial = 0; trial < 400; ++trial) {
    int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    auto s = random_subset(rng, c, 4);
    agree_with_oracle(a, bz, i, j, s, [&](int ii, int jj, const std::vector<int>& ss) {
      auto r = small.query(ii, jj, ss);
      return r ? std::optional(std::make_pair(*r, -1)) : std::nullopt;
    });
    agree_with_oracle(a, bz, i, j, s, [&](int ii, int jj, const std::vector<int>& ss) {
      auto r = bucketed.query(ii, jj, ss);
      return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
    });
    agree_with_oracle(a, bz, i, j, s, [&](int ii, int jj, const std::vector<int>& ss) {
      auto r = bd.query(ii, jj, ss);
      return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
    });
    agree_with_oracle(a, bz, i, j, s, [&](int ii, int jj, const std::vector<int>& ss) {
      auto r = mono.query(ii, jj, ss);
      return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
    });
  }
}

TEST_CASE("bucket spread exactly at the small/large cutoff") {
  // spread == 2w is small; spread == 2w + 1 is large. Build columns pinned
  // at both sides of the boundary.
  std::int64_t w = 3;
  int c = 8, n = 2;
  Mat a(n, c, 0);
  for (int k = 0; k < c; ++k) {
    a.at(0, k) = (k % 2 == 0) ? -w : w;
    a.at(1, k) = 0;
  }
  Mat b(c, n, 0);
  for (int k = 0; k < c; ++k) {
    b.at(k, 0) = (k < 4) ? 0 : 2 * w;          // one bucket of spread 2w when p = c
    b.at(k, 1) = (k < 4) ? 0 : 2 * w + 1;      // spread 2w + 1: large
  }
  for (int p : {1, 2, 4, 8}) {
    auto d = BucketedMpq::build(a, b, w, p);
    Rng rng(p);
    for (int trial = 0; trial < 300; ++trial) {
      int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      auto s = random_subset(rng, c, c);
      agree_with_oracle(a, b, i, j, s, [&](int ii, int jj, const std::vector<int>& ss) {
        auto r = d.query(ii, jj, ss);
        return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
      });
    }
  }
}

TEST_CASE("bounded-diff degenerate shapes") {
  Rng rng(9);
  SUBCASE("budget of one: forbidden set must be empty") {
    Mat a = testutil::random_matrix(rng, 4, 7, -9, 9);
    Mat b = testutil::random_block_bounded(rng, 7, 4, 2, 2, 12);
    auto d = BoundedDiffMpq::build(a, b, 2, 2, 1, 5);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        agree_with_oracle(a, b, i, j, {}, [&](int ii, int jj, const std::vector<int>& ss) {
          auto r = d.query(ii, jj, ss);
          return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
        });
    std::vector<int> one{0};
    CHECK_THROWS_AS(d.query(0, 0, one), std::invalid_argument);
  }
  SUBCASE("block wider than the matrix") {
    Mat a = testutil::random_matrix(rng, 3, 6, -9, 9);
    Mat b = testutil::random_block_bounded(rng, 6, 3, 8, 2, 12);  // one block covers all columns
    auto d = BoundedDiffMpq::build(a, b, 8, 2, 4, 5);
    Rng qr(21);
    for (int trial = 0; trial < 200; ++trial) {
      int i = static_cast<int>(qr.below(3));
      int j = static_cast<int>(qr.below(3));
      auto s = random_subset(qr, 6, 3);
      agree_with_oracle(a, b, i, j, s, [&](int ii, int jj, const std::vector<int>& ss) {
        auto r = d.query(ii, jj, ss);
        return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
      });
    }
  }
  SUBCASE("single row and single column") {
    Mat a = testutil::random_matrix(rng, 1, 5, -9, 9);
    Mat b = testutil::random_block_bounded(rng, 5, 1, 1, 1, 9);
    auto d = BoundedDiffMpq::build(a, b, 1, 1, 3, 1);
    for (int trial = 0; trial < 64; ++trial) {
      auto s = random_subset(rng, 5, 2);
      agree_with_oracle(a, b, 0, 0, s, [&](int ii, int jj, const std::vector<int>& ss) {
        auto r = d.query(ii, jj, ss);
        return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
      });
    }
  }
}

TEST_CASE("monotone degenerate shapes") {
  Rng rng(14);
  SUBCASE("one column") {
    Mat b(3, 1, 0);
    for (int k = 0; k < 3; ++k) b.at(k, 0) = rng.range(-5, 5);
    Mat a = testutil::random_matrix(rng, 1, 3, -5, 5);
    auto d = MonotoneMpq::build(a, b, 2, 1, 2);
    agree_with_oracle(a, b, 0, 0, {}, [&](int ii, int jj, const std::vector<int>& ss) {
      auto r = d.query(ii, jj, ss);
      return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
    });
  }
  SUBCASE("huge drop bound never clips") {
    Mat b = testutil::random_monotone(rng, 5, 7, 100, 40);
    Mat a = testutil::random_matrix(rng, 7, 5, -20, 20);
    auto d = MonotoneMpq::build(a, b, 4, 100, 6);
    Rng qr(3);
    for (int trial = 0; trial < 300; ++trial) {
      int i = static_cast<int>(qr.below(7));
      int j = static_cast<int>(qr.below(7));
      auto s = random_subset(qr, 5, 3);
      agree_with_oracle(a, b, i, j, s, [&](int ii, int jj, const std::vector<int>& ss) {
        auto r = d.query(ii, jj, ss);
        return r ? std::optional(std::make_pair(r->value, r->witness)) : std::nullopt;
      });
    }
  }
}

TEST_CASE("entries pinned at the admissible extremes") {
  std::int64_t w = 5;
  int n = 4, c = 6;
  Rng rng(77);
  Mat a(n, c), b(c, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < c; ++k)
      if (!rng.chance(0.2)) a.at(i, k) = rng.chance(0.5) ? w : -w;
  for (int k = 0; k < c; ++k)
    for (int j = 0; j < n; ++j)
      if (!rng.chance(0.2)) b.at(k, j) = rng.chance(0.5) ? w : -w;
  auto d = SmallEntriesMpq::build(a, b, w);
  auto dbig = SmallEntriesMpq::build(a, b, w, SmallEntriesMpq::Backend::kBigint);
  CHECK(d.checksum_recompute() == dbig.checksum_recompute());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (auto v : {-2 * w, 0l, 2 * w}) {
        std::int64_t expect = 0;
        for (int k = 0; k < c; ++k)
          if (finite(a.at(i, k)) && finite(b.at(k, j)) && a.at(i, k) + b.at(k, j) == v) ++expect;
        CHECK(d.count_at(i, j, v) == expect);
      }
      agree_with_oracle(a, b, i, j, {}, [&](int ii, int jj, const std::vector<int>& ss) {
        auto r = d.query(ii, jj, ss);
        return r ? std::optional(std::make_pair(*r, -1)) : std::nullopt;
      });
    }
}

TEST_CASE("hostile operation patterns for the dynamic structure") {
  auto check_all_ranges = [](DynamicRangeMode& dm, NaiveMode& naive) {
    for (std::int64_t l = 1; l <= naive.size(); l += 3)
      for (std::int64_t r = l; r <= naive.size(); r += 2) {
        auto expect = naive.query(l, r);
        auto got = dm.query(l, r);
        REQUIRE(got.frequency == expect.second);
        REQUIRE(naive.count_in_range(got.value, l, r) == got.frequency);
      }
  };

  SUBCASE("append-only, all equal") {
    ModeConfig cfg = ModeConfig::defaults(120, 1).with_T2(5);
    DynamicRangeMode dm(cfg);
    NaiveMode naive;
    for (int i = 1; i <= 100; ++i) {
      dm.insert(i, 7);
      naive.insert(i, 7);
    }
    check_all_ranges(dm, naive);
  }
  SUBCASE("two alternating values, rebuild churn") {
    ModeConfig cfg = ModeConfig::defaults(100, 2).with_T2(3).with_T3(2);
    DynamicRangeMode dm(cfg);
    NaiveMode naive;
    for (int i = 1; i <= 90; ++i) {
      dm.insert(i, static_cast<std::uint32_t>(i % 2));
      naive.insert(i, static_cast<std::uint32_t>(i % 2));
      if (i % 7 == 0) dm.rebuild();
    }
    check_all_ranges(dm, naive);
  }
  SUBCASE("front-position churn") {
    ModeConfig cfg = ModeConfig::defaults(80, 3).with_T2(4);
    DynamicRangeMode dm(cfg);
    NaiveMode naive;
    Rng rng(4);
    for (int step = 0; step < 400; ++step) {
      if (naive.size() < 40) {
        auto v = static_cast<std::uint32_t>(rng.below(5));
        dm.insert(1, v);
        naive.insert(1, v);
      } else {
        dm.erase(1);
        naive.erase(1);
      }
      if (step % 37 == 0 && naive.size() > 0) check_all_ranges(dm, naive);
    }
  }
  SUBCASE("drain to empty and refill") {
    ModeConfig cfg = ModeConfig::defaults(60, 4).with_T2(6);
    DynamicRangeMode dm(cfg);
    NaiveMode naive;
    Rng rng(5);
    for (int round = 0; round < 3; ++round) {
      for (int i = 0; i < 30; ++i) {
        auto pos = rng.range(1, naive.size() + 1);
        auto v = static_cast<std::uint32_t>(rng.below(4));
        dm.insert(pos, v);
        naive.insert(pos, v);
      }
      check_all_ranges(dm, naive);
      while (naive.size() > 0) {
        auto pos = rng.range(1, naive.size());
        dm.erase(pos);
        naive.erase(pos);
      }
      CHECK_THROWS_AS(dm.query(1, 1), std::out_of_range);
    }
  }
  SUBCASE("values at the 32-bit extremes") {
    ModeConfig cfg = ModeConfig::defaults(64, 9).with_T2(4);
    DynamicRangeMode dm(cfg);
    NaiveMode naive;
    Rng rng(8);
    std::vector<std::uint32_t> pool{0u, 1u, 0xffffffffu, 0xfffffffeu, 0x80000000u};
    for (int step = 0; step < 200; ++step) {
      auto pos = rng.range(1, naive.size() + 1);
      auto v = pool[rng.below(pool.size())];
      dm.insert(pos, v);
      naive.insert(pos, v);
      if (naive.size() > 50) {
        auto dp = rng.range(1, naive.size());
        dm.erase(dp);
        naive.erase(dp);
      }
      if (step % 17 == 0) check_all_ranges(dm, naive);
    }
  }
  SUBCASE("explicit rebuild interleaved with staged rebuilding") {
    ModeConfig cfg = ModeConfig::defaults(100, 5).with_T2(8).with_deamortize(true);
    DynamicRangeMode dm(cfg);
    NaiveMode naive;
    Rng rng(6);
    for (int step = 0; step < 500; ++step) {
      double roll = rng.unit();
      if (naive.size() == 0 || (roll < 0.55 && naive.size() < 100)) {
        auto pos = rng.range(1, naive.size() + 1);
        auto v = static_cast<std::uint32_t>(rng.below(20));
        dm.insert(pos, v);
        naive.insert(pos, v);
      } else if (roll < 0.7) {
        auto pos = rng.range(1, naive.size());
        dm.erase(pos);
        naive.erase(pos);
      } else {
        auto l = rng.range(1, naive.size());
        auto r = rng.range(l, naive.size());
        auto expect = naive.query(l, r);
        auto got = dm.query(l, r);
        REQUIRE(got.frequency == expect.second);
      }
      if (step % 61 == 0) dm.rebuild();
      if (step % 43 == 0) dm.rebuild_step(100);
    }
    CHECK(dm.stats().s_budget_violations == 0);
  }
}
