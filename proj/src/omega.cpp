#include "rangemode/omega.hpp"

#include <algorithm>

namespace rangemode {

namespace {
constexpr double kLoK = 1.75, kLoW = 3.021591;
constexpr double kHiK = 2.0, kHiW = 3.251640;
}  // namespace

double omega_upper_bound(double k) {
  // tolerate round-off at the table edges (s = 2 often arrives as 2 + ulp)
  if (k >= kLoK - 1e-9 && k <= kHiK + 1e-9) {
    double kk = std::clamp(k, kLoK, kHiK);
    return ((kk - kLoK) * kHiW + (kHiK - kk) * kLoW) / (kHiK - kLoK);
  }
  double v = std::max(2.0, k + 1.0) * 1.2;
  return std::clamp(v, 2.0, k + 2.0);
}

}  // namespace rangemode
