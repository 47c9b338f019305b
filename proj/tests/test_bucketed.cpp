#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "rangemode/core/errors.hpp"
#include "rangemode/harness/oracles.hpp"
#include "rangemode/minplus/bucketed.hpp"
#include "test_util.hpp"

using namespace rangemode;
using namespace rangemode::minplus;
using testutil::random_matrix;
using testutil::random_small_matrix;
using testutil::random_subset;

namespace {

Mat worked_a() {
  Mat a(2, 3);
  a.at(0, 0) = 0;
  a.at(0, 1) = 2;
  a.at(1, 0) = 1;
  a.at(1, 1) = -1;
  a.at(1, 2) = 0;
  return a;
}

Mat worked_b() {
  Mat b(3, 2);
  b.at(0, 0) = 1;
  b.at(0, 1) = 2;
  b.at(1, 0) = 0;
  b.at(1, 1) = -2;
  b.at(2, 0) = 3;
  b.at(2, 1) = 1;
  return b;
}

// Checks value, witness validity, and witness optimality against the scan oracle.
void check_query(BucketedMpq& d, const Mat& a, const Mat& b, int i, int j, const std::vector<int>& s) {
  auto got = d.query(i, j, s);
  auto expect = harness::oracle_minplus(a, b, i, j, s);
  if (!expect) {
    CHECK_FALSE(got.has_value());
    return;
  }
  REQUIRE(got.has_value());
  CHECK(got->value == expect->first);
  // witness validity: recomputes to the value and is not forbidden
  REQUIRE(got->witness >= 0);
  REQUIRE(got->witness < a.cols);
  CHECK(a.at(i, got->witness) + b.at(got->witness, j) == got->value);
  for (int k : s) CHECK(k != got->witness);
}

}  // namespace

TEST_CASE("worked example: all buckets small, queries with witnesses") {
  Mat a = worked_a(), b = worked_b();
  auto d = BucketedMpq::build(a, b, 3, 2);
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < d.bucket_count(); ++l) CHECK(d.bucket_small(j, l));

  auto r0 = d.query(1, 1, {});
  REQUIRE(r0.has_value());
  CHECK(r0->value == -3);
  CHECK(r0->witness == 1);

  std::vector<int> s{1};
  auto r1 = d.query(1, 1, s);
  REQUIRE(r1.has_value());
  CHECK(r1->value == 1);  // min(1+2, 0+1)
  CHECK(r1->witness == 2);

  std::vector<int> all{0, 1, 2};
  Mat ainf(2, 3);  // all-inf A: no candidates at all
  auto dinf = BucketedMpq::build(ainf, b, 3, 2);
  CHECK_FALSE(dinf.query(0, 0, {}).has_value());
  check_query(d, a, b, 0, 0, all);
}

TEST_CASE("singleton buckets are always small") {
  Mat a(1, 2, 0);
  Mat b(2, 1, 0);
  b.at(0, 0) = 0;
  b.at(1, 0) = 1000000;
  auto d = BucketedMpq::build(a, b, 1, 1);
  CHECK(d.bucket_count() == 2);
  CHECK(d.bucket_small(0, 0));
  CHECK(d.bucket_small(0, 1));
  auto r = d.query(0, 0, {});
  REQUIRE(r.has_value());
  CHECK(r->value == 0);
}

TEST_CASE("large-bucket counts match a direct count") {
  Rng rng(321);
  std::int64_t w = 2;
  Mat a = random_small_matrix(rng, 8, 32, w);
  Mat b = random_matrix(rng, 32, 16, -1000000, 1000000);  // huge spreads: mostly large buckets
  int p = 4;
  auto d = BucketedMpq::build(a, b, w, p);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 16; ++j)
      for (int l = 0; l < d.bucket_count(); ++l) {
        std::int64_t expect = 0;
        if (!d.bucket_small(j, l))
          for (std::int32_t k : d.bucket_members(j, l))
            if (finite(a.at(i, k))) ++expect;
        CHECK(d.t_large_count(i, j, l) == expect);
      }
}

TEST_CASE("bucket partition holds for every c and p, ragged tail included") {
  Rng rng(17);
  for (int c = 1; c <= 13; ++c) {
    for (int p = 1; p <= c; ++p) {
      Mat a = random_small_matrix(rng, 3, c, 2);
      Mat b = random_matrix(rng, c, 4, -50, 50);
      auto d = BucketedMpq::build(a, b, 2, p);
      CHECK(d.bucket_count() == (c + p - 1) / p);
      for (int j = 0; j < 4; ++j) {
        std::vector<int> seen(static_cast<size_t>(c), 0);
        for (int l = 0; l < d.bucket_count(); ++l) {
          auto members = d.bucket_members(j, l);
          // bucket l holds ranks l*p+1 .. min((l+1)p, c)
          CHECK(static_cast<int>(members.size()) == std::min((l + 1) * p, c) - l * p);
          for (std::int32_t k : members) {
            ++seen[static_cast<size_t>(k)];
            CHECK(d.bucket_lo(j, l) <= b.at(k, j));
            CHECK(b.at(k, j) <= d.bucket_hi(j, l));
          }
        }
        for (int k = 0; k < c; ++k) CHECK(seen[static_cast<size_t>(k)] == 1);
      }
    }
  }
}

TEST_CASE("exhaustive small instances: query equals brute force for all p") {
  Rng rng(92);
  for (int trial = 0; trial < 6; ++trial) {
    std::int64_t w = rng.range(1, 6);
    int n = static_cast<int>(rng.range(1, 12));
    int c = static_cast<int>(rng.range(1, 24));
    Mat a = random_small_matrix(rng, n, c, w);
    Mat b = random_matrix(rng, c, n, -4 * w, 4 * w);  // mixes small and large buckets
    for (int p = 1; p <= c; ++p) {
      auto d = BucketedMpq::build(a, b, w, p);
      std::uint64_t baseline = d.checksum();
      REQUIRE(baseline == d.checksum_recompute());
      for (int q = 0; q < 60; ++q) {
        int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        auto s = random_subset(rng, c, c);
        check_query(d, a, b, i, j, s);
        REQUIRE(d.checksum() == baseline);
      }
      REQUIRE(d.checksum_recompute() == baseline);
    }
  }
}

TEST_CASE("self check passes on random structures and trips on corrupted bounds") {
  Rng rng(4444);
  for (int trial = 0; trial < 100; ++trial) {
    std::int64_t w = rng.range(1, 4);
    int n = static_cast<int>(rng.range(1, 6));
    int c = static_cast<int>(rng.range(4, 20));
    Mat a = random_small_matrix(rng, n, c, w, 0.3);
    Mat b = random_matrix(rng, c, n, -100000, 100000);
    int p = static_cast<int>(rng.range(1, c));
    auto d = BucketedMpq::build(a, b, w, p);
    auto diag = d.self_check();
    CHECK(diag.violations.empty());
  }

  // Dense A and wild B spread: many large buckets, then corrupt one.
  std::int64_t w = 1;
  Mat a = random_small_matrix(rng, 2, 12, w, 0.0);
  Mat b(12, 1, 0);
  for (int k = 0; k < 12; ++k) b.at(k, 0) = 1000 * k * k;
  auto d = BucketedMpq::build(a, b, w, 3);
  auto clean = d.self_check();
  CHECK(clean.checked > 0);
  CHECK(clean.violations.empty());
  d.debug_override_bucket_bounds(0, 1, -500000, 500000);
  auto corrupted = d.self_check();
  CHECK_FALSE(corrupted.violations.empty());
}

TEST_CASE("query work stays within the |s| + p shape") {
  Rng rng(31337);
  std::int64_t w = 4;
  Mat a = random_small_matrix(rng, 8, 32, w);
  Mat b = random_matrix(rng, 32, 8, -8 * w, 8 * w);
  for (int p : {1, 2, 4, 8, 16}) {
    auto d = BucketedMpq::build(a, b, w, p);
    double worst = 0;
    for (int q = 0; q < 300; ++q) {
      int i = static_cast<int>(rng.below(8));
      int j = static_cast<int>(rng.below(8));
      auto s = random_subset(rng, 32, 16);
      d.query(i, j, s);
      double ratio = static_cast<double>(d.last_query_touches()) /
                     static_cast<double>(s.size() + static_cast<size_t>(p));
      worst = std::max(worst, ratio);
    }
    CHECK(worst <= 8.0);
  }
}
