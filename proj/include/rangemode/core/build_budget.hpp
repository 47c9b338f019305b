#pragma once

#include <cstdint>

namespace rangemode {

// Work accounting for resumable builds. One unit is roughly one matrix cell
// or one element visit. The cap is soft: builders stop at the first chunk
// boundary at or after exhaustion.
struct BuildBudget {
  bool unlimited = true;
  std::int64_t remaining = 0;

  static BuildBudget infinite() { return BuildBudget{true, 0}; }
  static BuildBudget limit(std::int64_t n) { return BuildBudget{false, n}; }

  void charge(std::int64_t cost) {
    if (!unlimited) remaining -= cost;
  }
  bool exhausted() const { return !unlimited && remaining <= 0; }
};

}  // namespace rangemode
