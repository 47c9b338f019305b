#pragma once

#include <cstdint>
#include <random>

namespace rangemode {

// mt19937_64 with explicit bounded draws so that streams are reproducible
// regardless of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  // uniform in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    // rejection sampling on the top bits; unbiased
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t v;
    do {
      v = eng_() & mask;
    } while (v >= n);
    return v;
  }

  // uniform in [lo, hi] inclusive
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double unit() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rangemode
