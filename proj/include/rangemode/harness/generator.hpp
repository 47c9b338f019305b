#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rangemode/harness/trace.hpp"

namespace rangemode::harness {

// Value distribution for generated workloads.
struct ValueDist {
  enum class Kind { kUniform, kZipf } kind = Kind::kUniform;
  std::uint32_t domain = 64;
  double theta = 1.1;  // zipf skew

  static ValueDist uniform(std::uint32_t domain) { return {Kind::kUniform, domain, 0.0}; }
  static ValueDist zipf(std::uint32_t domain, double theta) { return {Kind::kZipf, domain, theta}; }
  // "uniform", "uniform:100", "zipf:1.1", "zipf:1.1:500"
  static ValueDist parse(const std::string& spec);
};

struct OpMix {
  double insert = 0.45;
  double remove = 0.20;
  double query = 0.35;
};

// Deterministic for a fixed seed; never emits an op that is invalid against
// the running length (infeasible draws are re-drawn; an impossible mix is
// rejected).
Trace generate_trace(std::int64_t n_ops, std::int64_t capacity, const ValueDist& dist, const OpMix& mix,
                     std::uint64_t seed);

}  // namespace rangemode::harness
