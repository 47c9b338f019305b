#pragma once

#include <algorithm>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rangemode {

// Global switch so tests and benchmarks can run the same kernels serially.
bool parallel_enabled();
void set_parallel_enabled(bool on);
int parallel_threads();

// Data-parallel loop over [0, n). Bodies must write disjoint state so the
// result is identical to the serial run. `cost_per_item` is a rough cell
// count used to keep small loops serial; fork overhead otherwise dominates.
template <class F>
void parallel_for(std::int64_t n, std::int64_t cost_per_item, F&& body) {
#ifdef _OPENMP
  constexpr std::int64_t kMinParallelCells = 1 << 16;
  if (parallel_enabled() && n >= 2 && n * std::max<std::int64_t>(1, cost_per_item) >= kMinParallelCells) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

template <class F>
void parallel_for(std::int64_t n, F&& body) {
  parallel_for(n, 1024, static_cast<F&&>(body));
}

}  // namespace rangemode
