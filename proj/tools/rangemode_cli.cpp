// Command-line front end: trace replay, fuzz verification, benchmarking,
// and the exponent balance calculator.
//
// Exit codes: 0 pass, 1 divergence/verification failure, 2 usage/parse error.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>

#include "rangemode/harness/runner.hpp"
#include "rangemode/mode/params.hpp"

namespace {

using rangemode::harness::BenchSpec;
using rangemode::harness::Trace;
using rangemode::harness::ValueDist;
using rangemode::harness::VerifySpec;
using rangemode::mode::ModeConfig;

struct ExponentOverrides {
  double t1 = -1, t2 = -1, t3 = -1;
};

ModeConfig make_config(std::int64_t capacity, const ExponentOverrides& exp, std::uint64_t seed) {
  ModeConfig cfg = ModeConfig::defaults(capacity, seed);
  auto apply = [&](double t, double& slot, std::int64_t& big) {
    if (t < 0) return;
    if (t <= 0.0 || t > 1.0) throw std::invalid_argument("exponents must lie in (0, 1]");
    slot = t;
    double v = std::pow(static_cast<double>(capacity), t);
    big = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(v - 1e-9)));
  };
  apply(exp.t1, cfg.t1, cfg.T1);
  apply(exp.t2, cfg.t2, cfg.T2);
  apply(exp.t3, cfg.t3, cfg.T3);
  return cfg;
}

bool parse_seed_range(const std::string& text, std::uint64_t& lo, std::uint64_t& hi) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoull(text);
      return true;
    }
    lo = std::stoull(text.substr(0, dots));
    hi = std::stoull(text.substr(dots + 2));
    return lo <= hi;
  } catch (...) {
    return false;
  }
}

int cmd_run(const std::string& trace_path, const std::string& impl, const ExponentOverrides& exp) {
  Trace trace = rangemode::harness::parse_trace_file(trace_path);
  ModeConfig cfg = make_config(trace.capacity, exp, trace.seed + 1);
  auto result = rangemode::harness::run_trace(trace, impl, cfg);
  for (const auto& [value, freq] : result.answers) std::cout << value << ' ' << freq << '\n';
  return 0;
}

int cmd_verify(const VerifySpec& spec) {
  auto div = rangemode::harness::verify(spec);
  if (!div) {
    std::cerr << "verify: seeds " << spec.seed_lo << ".." << spec.seed_hi << " x " << spec.n_ops
              << " ops: pass\n";
    return 0;
  }
  std::cerr << "verify: DIVERGENCE at seed " << div->seed << ", op index " << div->op_index << "\n";
  if (!div->what.empty()) {
    std::cerr << "  error: " << div->what << "\n";
  } else {
    std::cerr << "  query #" << div->query_index << " [" << div->l << ", " << div->r << "]\n"
              << "  expect value " << div->expect_value << " freq " << div->expect_freq << "\n"
              << "  got    value " << div->got_value << " freq " << div->got_freq
              << " (recounts to " << div->got_value_recount << ")\n";
  }
  std::cerr << "  repro: rangemode verify --ops " << spec.n_ops << " --maxlen " << spec.capacity
            << " --seeds " << div->seed << ".." << div->seed << (spec.deamortize ? " --deamortize" : "")
            << "\n";
  return 1;
}

int cmd_bench(BenchSpec spec, const ExponentOverrides& exp, const std::string& out_path) {
  ModeConfig cfg = make_config(spec.capacity, exp, spec.seed);
  auto records = rangemode::harness::bench(spec, cfg);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "bench: cannot open " << out_path << " for writing\n";
    return 2;
  }
  out << rangemode::harness::bench_csv_header() << '\n';
  for (const auto& rec : records) out << rangemode::harness::bench_csv_row(rec) << '\n';
  std::cerr << "bench: wrote " << records.size() << " rows to " << out_path << "\n";
  return 0;
}

int cmd_balance(double t2) {
  auto [per_op, rebuild] = rangemode::mode::balance_exponents(t2);
  std::cout << "per_op=" << per_op << " rebuild=" << rebuild << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic range mode engine"};
  app.require_subcommand(1);

  ExponentOverrides exp;

  auto* run = app.add_subcommand("run", "replay a trace file and print one answer per query");
  std::string trace_path, impl = "mpq";
  run->add_option("--trace", trace_path, "trace file")->required();
  run->add_option("--impl", impl, "naive or mpq")->check(CLI::IsMember({"naive", "mpq"}));
  run->add_option("--t1", exp.t1, "override exponent t1");
  run->add_option("--t2", exp.t2, "override exponent t2");
  run->add_option("--t3", exp.t3, "override exponent t3");

  auto* ver = app.add_subcommand("verify", "fuzz generated traces against the recount oracle");
  VerifySpec vspec;
  std::string seeds = "0..9", dist = "uniform:64";
  ver->add_option("--ops", vspec.n_ops, "operations per seed");
  ver->add_option("--maxlen", vspec.capacity, "capacity bound N");
  ver->add_option("--seeds", seeds, "seed range S0..S1");
  ver->add_option("--dist", dist, "value distribution (uniform[:V] | zipf:theta[:V])");
  ver->add_flag("--deamortize", vspec.deamortize, "staged rebuilding");

  auto* ben = app.add_subcommand("bench", "replay generated traces and emit latency CSV");
  BenchSpec bspec;
  std::string bench_impl = "all", out_path = "bench.csv", bdist = "uniform:64";
  ben->add_option("--ops", bspec.n_ops, "operations");
  ben->add_option("--maxlen", bspec.capacity, "capacity bound N");
  ben->add_option("--impl", bench_impl, "naive, mpq, or all")->check(CLI::IsMember({"naive", "mpq", "all"}));
  ben->add_option("--out", out_path, "output CSV path")->required();
  ben->add_option("--dist", bdist, "value distribution");
  ben->add_option("--seed", bspec.seed, "workload seed");
  ben->add_option("--t1", exp.t1, "override exponent t1");
  ben->add_option("--t2", exp.t2, "override exponent t2");
  ben->add_option("--t3", exp.t3, "override exponent t3");

  auto* bal = app.add_subcommand("balance", "print the per-op/rebuild exponent pair for a t2");
  double t2 = rangemode::mode::kBalancedT2;
  bal->add_option("--t2", t2, "exponent in (0, 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems map to exit 2
  }

  try {
    if (run->parsed()) return cmd_run(trace_path, impl, exp);
    if (ver->parsed()) {
      if (!parse_seed_range(seeds, vspec.seed_lo, vspec.seed_hi)) {
        std::cerr << "verify: bad --seeds range '" << seeds << "'\n";
        return 2;
      }
      vspec.dist = ValueDist::parse(dist);
      return cmd_verify(vspec);
    }
    if (ben->parsed()) {
      bspec.dist = ValueDist::parse(bdist);
      if (bench_impl != "all") bspec.impls = {bench_impl};
      return cmd_bench(bspec, exp, out_path);
    }
    if (bal->parsed()) return cmd_balance(t2);
  } catch (const rangemode::harness::TraceParseError& e) {
    std::cerr << "trace parse error at line " << e.line << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
