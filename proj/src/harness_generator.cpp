#include "rangemode/harness/generator.hpp"

#include <cmath>
#include <stdexcept>

#include "rangemode/core/rng.hpp"

namespace rangemode::harness {

ValueDist ValueDist::parse(const std::string& spec) {
  auto split = [&](const std::string& s) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= s.size()) {
      size_t colon = s.find(':', start);
      if (colon == std::string::npos) {
        parts.push_back(s.substr(start));
        break;
      }
      parts.push_back(s.substr(start, colon - start));
      start = colon + 1;
    }
    return parts;
  };
  auto parts = split(spec);
  if (parts.empty()) throw std::invalid_argument("ValueDist: empty spec");
  if (parts[0] == "uniform") {
    ValueDist d = uniform(64);
    if (parts.size() > 1) d.domain = static_cast<std::uint32_t>(std::stoul(parts[1]));
    if (parts.size() > 2) throw std::invalid_argument("ValueDist: too many fields");
    if (d.domain == 0) throw std::invalid_argument("ValueDist: empty domain");
    return d;
  }
  if (parts[0] == "zipf") {
    ValueDist d = zipf(512, 1.1);
    if (parts.size() > 1) d.theta = std::stod(parts[1]);
    if (parts.size() > 2) d.domain = static_cast<std::uint32_t>(std::stoul(parts[2]));
    if (parts.size() > 3) throw std::invalid_argument("ValueDist: too many fields");
    if (d.domain == 0) throw std::invalid_argument("ValueDist: empty domain");
    if (!(d.theta > 0)) throw std::invalid_argument("ValueDist: zipf theta must be positive");
    return d;
  }
  throw std::invalid_argument("ValueDist: unknown distribution '" + parts[0] + "'");
}

namespace {

class ValueSampler {
 public:
  explicit ValueSampler(const ValueDist& dist) : dist_(dist) {
    if (dist.kind == ValueDist::Kind::kZipf) {
      cdf_.reserve(dist.domain);
      double acc = 0;
      for (std::uint32_t v = 0; v < dist.domain; ++v) {
        acc += 1.0 / std::pow(static_cast<double>(v + 1), dist.theta);
        cdf_.push_back(acc);
      }
      for (double& x : cdf_) x /= acc;
    }
  }

  std::uint32_t draw(Rng& rng) const {
    if (dist_.kind == ValueDist::Kind::kUniform) return static_cast<std::uint32_t>(rng.below(dist_.domain));
    double u = rng.unit();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint32_t>(it - cdf_.begin());
  }

 private:
  ValueDist dist_;
  std::vector<double> cdf_;
};

}  // namespace

Trace generate_trace(std::int64_t n_ops, std::int64_t capacity, const ValueDist& dist, const OpMix& mix,
                     std::uint64_t seed) {
  if (n_ops < 0 || capacity < 1) throw std::invalid_argument("generate_trace: bad sizes");
  double total = mix.insert + mix.remove + mix.query;
  if (!(total > 0) || std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("generate_trace: op mix must sum to 1");
  Trace trace;
  trace.capacity = capacity;
  trace.seed = seed;
  Rng rng(seed);
  ValueSampler sampler(dist);
  std::int64_t len = 0;
  for (std::int64_t i = 0; i < n_ops; ++i) {
    Trace::Op op{};
    bool ok = false;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
      double roll = rng.unit();
      if (roll < mix.insert) {
        if (len >= capacity) continue;  // re-draw
        op = {Trace::OpKind::kInsert, rng.range(1, len + 1), static_cast<std::int64_t>(sampler.draw(rng))};
        ++len;
      } else if (roll < mix.insert + mix.remove) {
        if (len == 0) continue;
        op = {Trace::OpKind::kDelete, rng.range(1, len), 0};
        --len;
      } else {
        if (len == 0) continue;
        std::int64_t a = rng.range(1, len), b = rng.range(1, len);
        op = {Trace::OpKind::kQuery, std::min(a, b), std::max(a, b)};
      }
      ok = true;
    }
    if (!ok) throw std::invalid_argument("generate_trace: infeasible op mix");
    trace.ops.push_back(op);
  }
  return trace;
}

}  // namespace rangemode::harness
