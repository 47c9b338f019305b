#pragma once

#include <functional>

namespace rangemode {

// Upper bound on the rectangular matrix-multiplication exponent omega(k)
// (multiplying n x n^k by n^k x n). Used purely as a tuning constant for
// block widths and the parameter balance calculator, never for an actual
// product. Inside [1.75, 2] this is the convex interpolation of the two
// published endpoints omega(1.75) <= 3.021591 and omega(2) <= 3.251640
// (slope 0.920196); outside that range a crude clamped heuristic keeps the
// tuning sane.
double omega_upper_bound(double k);

using OmegaFn = std::function<double(double)>;

}  // namespace rangemode
