#include "rangemode/mode/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rangemode::mode {

namespace {
std::int64_t ceil_pow(std::int64_t n, double t) {
  if (n <= 1) return 1;
  double v = std::pow(static_cast<double>(n), t);
  auto r = static_cast<std::int64_t>(std::ceil(v - 1e-9));
  return std::max<std::int64_t>(1, std::min(r, n));
}
}  // namespace

ModeConfig ModeConfig::defaults(std::int64_t capacity, std::uint64_t seed) {
  if (capacity < 1) throw std::invalid_argument("ModeConfig: capacity must be positive");
  ModeConfig cfg;
  cfg.capacity = capacity;
  cfg.t2 = kBalancedT2;
  cfg.t1 = 1.0 - cfg.t2 / 2.0;
  cfg.t3 = cfg.t2;
  cfg.T1 = ceil_pow(capacity, cfg.t1);
  cfg.T2 = ceil_pow(capacity, cfg.t2);
  cfg.T3 = ceil_pow(capacity, cfg.t3);
  cfg.seed = seed;
  return cfg;
}

ModeConfig& ModeConfig::with_T3(std::int64_t v) {
  if (v < 1) throw std::invalid_argument("ModeConfig: T3 must be >= 1");
  T3 = v;
  t3 = capacity > 1 ? std::log(static_cast<double>(v)) / std::log(static_cast<double>(capacity)) : 0.0;
  return *this;
}

ModeConfig& ModeConfig::with_T2(std::int64_t v) {
  if (v < 1) throw std::invalid_argument("ModeConfig: T2 must be >= 1");
  T2 = v;
  t2 = capacity > 1 ? std::log(static_cast<double>(v)) / std::log(static_cast<double>(capacity)) : 0.0;
  return *this;
}

ModeConfig& ModeConfig::with_T1(std::int64_t v) {
  if (v < 1) throw std::invalid_argument("ModeConfig: T1 must be >= 1");
  T1 = v;
  t1 = capacity > 1 ? std::log(static_cast<double>(v)) / std::log(static_cast<double>(capacity)) : 0.0;
  return *this;
}

std::pair<double, double> balance_exponents(double t2, const OmegaFn& omega) {
  if (!(t2 > 0.0 && t2 < 1.0)) throw std::invalid_argument("balance_exponents: t2 must be in (0, 1)");
  double t1 = 1.0 - 0.5 * t2;
  double t3 = t2;
  double s = (1.0 - 0.5 * t2) / (1.0 - t2);
  double per_op = std::max({2.0 - 2.0 * t1, t2, t3});
  double rebuild = (1.0 - t3) * (8.0 / 5.0 + s + omega(s) / 5.0) - (6.0 / 5.0) * t2;
  return {per_op, rebuild};
}

}  // namespace rangemode::mode
