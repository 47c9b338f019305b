#pragma once

#include <cstdint>
#include <utility>

#include "rangemode/omega.hpp"

namespace rangemode::mode {

// Tuning exponents for the dynamic range mode structure. T1 controls the
// frequent-value cutoff (count > capacity/T1), T2 the rebuild cadence and
// the query-set budget handed to the matrix structures, T3 the segment
// length of the snapshot decomposition.
struct ModeConfig {
  std::int64_t capacity = 0;  // bound N on the live sequence length
  double t1 = 0, t2 = 0, t3 = 0;
  std::int64_t T1 = 1, T2 = 1, T3 = 1;  // ceil(capacity^t*)
  bool deamortize = false;
  std::uint64_t seed = 1;

  static ModeConfig defaults(std::int64_t capacity, std::uint64_t seed = 1);

  ModeConfig& with_T3(std::int64_t v);  // pathological overrides for testing
  ModeConfig& with_T2(std::int64_t v);
  ModeConfig& with_T1(std::int64_t v);
  ModeConfig& with_deamortize(bool on) {
    deamortize = on;
    return *this;
  }
};

// Balanced default exponent for t2; t1 = 1 - t2/2 and t3 = t2.
inline constexpr double kBalancedT2 = 0.655994;

// For a given t2 (with t1 = 1 - t2/2, t3 = t2) returns the pair of
// per-operation cost exponents: the direct per-op work max(2-2*t1, t2, t3)
// and the amortized rebuild work (1-t3)*(8/5 + s + omega(s)/5) - (6/5)*t2
// where s = (1 - t2/2)/(1 - t2). At t2 = kBalancedT2 the two agree.
std::pair<double, double> balance_exponents(double t2, const OmegaFn& omega = omega_upper_bound);

}  // namespace rangemode::mode
