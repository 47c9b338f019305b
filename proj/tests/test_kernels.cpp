// The build kernels run through parallel_for; everything they produce must be
// identical to the serial reference run.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rangemode/core/parallel.hpp"
#include "rangemode/minplus/bounded_diff.hpp"
#include "rangemode/minplus/monotone.hpp"
#include "rangemode/mode/dynamic_mode.hpp"
#include "test_util.hpp"

using namespace rangemode;
using namespace rangemode::minplus;
using testutil::random_block_bounded;
using testutil::random_matrix;
using testutil::random_monotone;
using testutil::random_small_matrix;

namespace {

struct SerialGuard {
  explicit SerialGuard(bool on) { set_parallel_enabled(on); }
  ~SerialGuard() { set_parallel_enabled(true); }
};

template <class BuildFn>
void check_parallel_matches_serial(BuildFn&& build) {
  std::uint64_t parallel, serial;
  {
    SerialGuard g(true);
    parallel = build();
  }
  {
    SerialGuard g(false);
    serial = build();
  }
  CHECK(parallel == serial);
}

}  // namespace

TEST_CASE("small-entry tables: parallel equals serial") {
  Rng rng(1);
  Mat a = random_small_matrix(rng, 48, 64, 6);
  Mat b = random_small_matrix(rng, 64, 48, 6);
  check_parallel_matches_serial(
      [&] { return SmallEntriesMpq::build(a, b, 6).checksum_recompute(); });
  check_parallel_matches_serial([&] {
    return SmallEntriesMpq::build(a, b, 6, SmallEntriesMpq::Backend::kBigint).checksum_recompute();
  });
}

TEST_CASE("bucketed tables: parallel equals serial") {
  Rng rng(2);
  Mat a = random_small_matrix(rng, 32, 64, 4);
  Mat b = random_matrix(rng, 64, 32, -200, 200);
  check_parallel_matches_serial([&] { return BucketedMpq::build(a, b, 4, 8).checksum_recompute(); });
}

TEST_CASE("bounded-diff preprocessing: parallel equals serial") {
  Rng rng(3);
  Mat a = random_matrix(rng, 24, 48, -60, 60);
  Mat b = random_block_bounded(rng, 48, 24, 4, 3, 80);
  check_parallel_matches_serial(
      [&] { return BoundedDiffMpq::build(a, b, 4, 3, 12, 99).checksum_recompute(); });
}

TEST_CASE("monotone stack: parallel equals serial") {
  Rng rng(4);
  Mat b = random_monotone(rng, 24, 40, 20, 300);
  Mat a = random_matrix(rng, 40, 24, -100, 100);
  check_parallel_matches_serial(
      [&] { return MonotoneMpq::build(a, b, 10, 20, 5).checksum_recompute(); });
}

TEST_CASE("snapshot build: parallel equals serial") {
  mode::ModeConfig cfg = mode::ModeConfig::defaults(400, 9);
  mode::DynamicRangeMode dm(cfg);
  Rng rng(5);
  for (int i = 0; i < 350; ++i)
    dm.insert(rng.range(1, dm.size() + 1), static_cast<std::uint32_t>(rng.below(20)));
  std::uint64_t parallel, serial;
  {
    SerialGuard g(true);
    parallel = dm.debug_trial_build_checksum({});
  }
  {
    SerialGuard g(false);
    serial = dm.debug_trial_build_checksum({});
  }
  CHECK(parallel == serial);
}
