#include "rangemode/harness/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rangemode/harness/naive_mode.hpp"
#include "rangemode/mode/dynamic_mode.hpp"

namespace rangemode::harness {

namespace {

const char* op_name(Trace::OpKind k) {
  switch (k) {
    case Trace::OpKind::kInsert:
      return "insert";
    case Trace::OpKind::kDelete:
      return "delete";
    default:
      return "query";
  }
}

double percentile(std::vector<double>& v, double p) {
  if (v.empty()) return 0;
  size_t idx = static_cast<size_t>(p * (v.size() - 1));
  std::nth_element(v.begin(), v.begin() + idx, v.end());
  return v[idx];
}

}  // namespace

std::string bench_csv_header() {
  return "n_ops,N,t1,t2,t3,impl,op_type,count,mean_ns,p50_ns,p95_ns,total_ms";
}

std::string bench_csv_row(const BenchRecord& rec) {
  std::ostringstream out;
  out << rec.n_ops << ',' << rec.capacity << ',' << rec.t1 << ',' << rec.t2 << ',' << rec.t3 << ','
      << rec.impl << ',' << rec.op_type << ',' << rec.count << ',' << rec.mean_ns << ',' << rec.p50_ns
      << ',' << rec.p95_ns << ',' << rec.total_ms;
  return out.str();
}

RunResult run_trace(const Trace& trace, const std::string& impl, const mode::ModeConfig& cfg,
                    bool collect_latencies) {
  if (impl != "naive" && impl != "mpq") throw std::invalid_argument("run_trace: unknown impl '" + impl + "'");
  std::int64_t bad = first_invalid_op(trace);
  if (bad >= 0)
    throw std::invalid_argument("run_trace: op " + std::to_string(bad) + " invalid against running length");

  RunResult result;
  std::vector<double> lat[3];
  NaiveMode naive;
  std::optional<mode::DynamicRangeMode> dyn;
  if (impl == "mpq") dyn.emplace(cfg);

  using Clock = std::chrono::steady_clock;
  for (const auto& op : trace.ops) {
    auto t0 = Clock::now();
    switch (op.kind) {
      case Trace::OpKind::kInsert:
        if (dyn)
          dyn->insert(op.a, static_cast<std::uint32_t>(op.b));
        else
          naive.insert(op.a, static_cast<std::uint32_t>(op.b));
        break;
      case Trace::OpKind::kDelete:
        if (dyn)
          dyn->erase(op.a);
        else
          naive.erase(op.a);
        break;
      case Trace::OpKind::kQuery: {
        if (dyn) {
          auto ans = dyn->query(op.a, op.b);
          result.answers.emplace_back(ans.value, ans.frequency);
        } else {
          result.answers.push_back(naive.query(op.a, op.b));
        }
        break;
      }
    }
    if (collect_latencies) {
      auto ns = std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
      lat[static_cast<int>(op.kind)].push_back(ns);
    }
  }

  if (collect_latencies) {
    for (int k = 0; k < 3; ++k) {
      auto& v = lat[k];
      if (v.empty()) continue;
      BenchRecord rec;
      rec.n_ops = static_cast<std::int64_t>(trace.ops.size());
      rec.capacity = trace.capacity;
      rec.t1 = cfg.t1;
      rec.t2 = cfg.t2;
      rec.t3 = cfg.t3;
      rec.impl = impl;
      rec.op_type = op_name(static_cast<Trace::OpKind>(k));
      rec.count = static_cast<std::int64_t>(v.size());
      double sum = 0;
      for (double x : v) sum += x;
      rec.mean_ns = sum / static_cast<double>(v.size());
      rec.total_ms = sum / 1e6;
      rec.p50_ns = percentile(v, 0.50);
      rec.p95_ns = percentile(v, 0.95);
      result.records.push_back(std::move(rec));
    }
  }
  return result;
}

std::optional<Divergence> verify(const VerifySpec& spec) {
  for (std::uint64_t seed = spec.seed_lo; seed <= spec.seed_hi; ++seed) {
    Trace trace = generate_trace(spec.n_ops, spec.capacity, spec.dist, spec.mix, seed);
    NaiveMode naive;
    mode::ModeConfig cfg = mode::ModeConfig::defaults(spec.capacity, seed);
    cfg.deamortize = spec.deamortize;
    mode::DynamicRangeMode dyn(cfg);
    std::int64_t query_index = 0;
    for (size_t idx = 0; idx < trace.ops.size(); ++idx) {
      const auto& op = trace.ops[idx];
      Divergence div;
      div.seed = seed;
      div.op_index = static_cast<std::int64_t>(idx);
      div.query_index = query_index;
      try {
        switch (op.kind) {
          case Trace::OpKind::kInsert:
            naive.insert(op.a, static_cast<std::uint32_t>(op.b));
            dyn.insert(op.a, static_cast<std::uint32_t>(op.b));
            break;
          case Trace::OpKind::kDelete:
            naive.erase(op.a);
            dyn.erase(op.a);
            break;
          case Trace::OpKind::kQuery: {
            ++query_index;
            auto expect = naive.query(op.a, op.b);
            auto got = dyn.query(op.a, op.b);
            std::int64_t recount = naive.count_in_range(got.value, op.a, op.b);
            if (expect.second != got.frequency || recount != got.frequency) {
              div.l = op.a;
              div.r = op.b;
              div.expect_value = expect.first;
              div.expect_freq = expect.second;
              div.got_value = got.value;
              div.got_freq = got.frequency;
              div.got_value_recount = recount;
              return div;
            }
            break;
          }
        }
      } catch (const std::exception& e) {
        div.what = e.what();
        return div;
      }
    }
  }
  return std::nullopt;
}

std::vector<BenchRecord> bench(const BenchSpec& spec, const mode::ModeConfig& cfg) {
  std::vector<BenchRecord> out;
  Trace trace = generate_trace(spec.n_ops, spec.capacity, spec.dist, spec.mix, spec.seed);
  for (const auto& impl : spec.impls) {
    run_trace(trace, impl, cfg, false);  // warmup
    auto result = run_trace(trace, impl, cfg, true);
    for (auto& rec : result.records) out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace rangemode::harness
