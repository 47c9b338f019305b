#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rangemode/harness/generator.hpp"
#include "rangemode/harness/trace.hpp"
#include "rangemode/mode/params.hpp"

namespace rangemode::harness {

// One CSV row of bench output; schema:
// n_ops,N,t1,t2,t3,impl,op_type,count,mean_ns,p50_ns,p95_ns,total_ms
struct BenchRecord {
  std::int64_t n_ops = 0;
  std::int64_t capacity = 0;
  double t1 = 0, t2 = 0, t3 = 0;
  std::string impl;
  std::string op_type;
  std::int64_t count = 0;
  double mean_ns = 0, p50_ns = 0, p95_ns = 0;
  double total_ms = 0;
};

std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& rec);

struct RunResult {
  std::vector<std::pair<std::uint32_t, std::int64_t>> answers;  // one per query op
  std::vector<BenchRecord> records;                             // one per op type present
};

// impl: "naive" or "mpq".
RunResult run_trace(const Trace& trace, const std::string& impl, const mode::ModeConfig& cfg,
                    bool collect_latencies = false);

struct Divergence {
  std::uint64_t seed = 0;
  std::int64_t op_index = 0;   // index of the offending query in the trace
  std::int64_t query_index = 0;
  std::int64_t l = 0, r = 0;
  std::uint32_t expect_value = 0;
  std::int64_t expect_freq = 0;
  std::uint32_t got_value = 0;
  std::int64_t got_freq = 0;
  std::int64_t got_value_recount = 0;
  std::string what;  // non-empty when the run aborted with an error
};

struct VerifySpec {
  std::int64_t n_ops = 2000;
  std::int64_t capacity = 1000;
  std::uint64_t seed_lo = 0, seed_hi = 9;
  ValueDist dist = ValueDist::uniform(64);
  OpMix mix;
  bool deamortize = false;
};

// Replays generated traces against both implementations. Frequencies must
// match exactly; returned values are validated by recount (ties are free).
// Returns the first divergence, or nullopt when everything agrees.
std::optional<Divergence> verify(const VerifySpec& spec);

struct BenchSpec {
  std::int64_t n_ops = 10000;
  std::int64_t capacity = 10000;
  std::vector<std::string> impls = {"naive", "mpq"};
  ValueDist dist = ValueDist::uniform(64);
  OpMix mix;
  std::uint64_t seed = 1;
};

std::vector<BenchRecord> bench(const BenchSpec& spec, const mode::ModeConfig& cfg);

}  // namespace rangemode::harness
