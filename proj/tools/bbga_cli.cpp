// bbga: command-line driver for runs, rate sweeps, comparisons, bound
// evaluation and Mann-Whitney tests.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bbga/engine.hpp"
#include "bbga/kernels.hpp"
#include "bbga/stats.hpp"
#include "bbga/sweep.hpp"
#include "bbga/theory.hpp"

namespace {

constexpr double kDefaultAlpha = 1e-3;

struct Common {
  std::string function = "onemax";
  std::size_t n = 100;
  std::string algo = "greedy2+1:uniform";
  std::uint64_t seed = 1;
  std::uint64_t budget = bbga::kDefaultBudget;
  std::size_t workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--function", c.function,
                  "onemax | royalroad:<b> | randompoly:<m>:<deg>:<seed> | "
                  "linear:<lo>:<hi>:<seed> | binval")
      ->capture_default_str();
  cmd->add_option("--n", c.n, "string length")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--algo", c.algo, "ea | greedy2+1[:xover][:tie] | ga:key=value,...")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "base seed")->capture_default_str();
  cmd->add_option("--budget", c.budget, "evaluation budget per run")->capture_default_str();
}

std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || line.find_first_not_of(" \t\r", used) != std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": not a number");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runtime experiments for steady-state GAs on pseudo-Boolean functions"};
  app.require_subcommand(1);
  std::string kernels = "auto";
  app.add_option("--kernels", kernels, "bit kernels: scalar, avx2 or auto")
      ->capture_default_str();

  // run
  Common run_opts;
  double run_c = 1.0;
  std::uint64_t trace_stride = 0;
  auto* run = app.add_subcommand("run", "single run, prints the run result");
  add_common(run, run_opts);
  run->add_option("--c", run_c, "mutation rate is c/n")->capture_default_str();
  run->add_option("--trace", trace_stride, "print best fitness every N generations");

  // sweep
  Common sweep_opts;
  std::string c_grid = "0.1:0.1:4.0";
  std::size_t sweep_runs = 100;
  std::string out;
  auto* sweep = app.add_subcommand("sweep", "runs over a grid of mutation rates, writes CSV");
  add_common(sweep, sweep_opts);
  sweep->add_option("--c-grid", c_grid, "start:step:end")->capture_default_str();
  sweep->add_option("--runs", sweep_runs, "runs per grid point")->capture_default_str();
  sweep->add_option("--out", out, "CSV output path (stdout when omitted)");
  sweep->add_option("--workers", sweep_opts.workers, "worker threads (0 = all cores)")
      ->capture_default_str();

  // compare
  Common cmp_opts;
  std::string algo_b = "ea";
  double cmp_c = 1.0;
  std::size_t cmp_runs = 100;
  std::string sided = "two";
  double alpha = kDefaultAlpha;
  auto* cmp = app.add_subcommand("compare", "Mann-Whitney U test between two algorithms");
  add_common(cmp, cmp_opts);
  cmp->add_option("--algo-b", algo_b, "second algorithm")->capture_default_str();
  cmp->add_option("--c", cmp_c, "mutation rate is c/n")->capture_default_str();
  cmp->add_option("--runs", cmp_runs, "runs per algorithm")->capture_default_str();
  cmp->add_option("--workers", cmp_opts.workers, "worker threads (0 = all cores)")
      ->capture_default_str();
  cmp->add_option("--sided", sided, "two | a-less | b-less")->capture_default_str();
  cmp->add_option("--alpha", alpha, "significance level")->capture_default_str();

  // theory
  std::string formula;
  std::vector<std::string> formula_args;
  bool list = false;
  auto* theory = app.add_subcommand("theory", "evaluate a bound or probability formula");
  theory->add_option("formula", formula, "formula id");
  theory->add_option("args", formula_args, "name=value arguments");
  theory->add_flag("--list", list, "list formula ids and parameters");

  // mwu
  std::string file_a, file_b;
  bool exact = false;
  std::string mwu_sided = "two";
  auto* mwu = app.add_subcommand("mwu", "Mann-Whitney U test on two single-column files");
  mwu->add_option("a", file_a, "first sample")->required();
  mwu->add_option("b", file_b, "second sample")->required();
  mwu->add_flag("--exact", exact, "exact enumeration (at most 16 values in total)");
  mwu->add_option("--sided", mwu_sided, "two | a-less | b-less")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  std::cout.precision(12);

  try {
    if (!bbga::kernels::select(kernels))
      throw std::invalid_argument("unknown or unsupported kernels '" + kernels + "'");

    if (*run) {
      const auto recipe = bbga::FunctionRecipe::parse(run_opts.function);
      const auto algo = bbga::AlgorithmSpec::parse(run_opts.algo);
      const auto spec = recipe.instantiate(run_opts.n, run_opts.seed);
      const auto config = algo.configure(
          run_opts.n, run_c / static_cast<double>(run_opts.n), run_opts.budget, run_opts.seed);
      bbga::RunOptions options;
      options.trace_stride = trace_stride;
      const auto r = bbga::run_ga(config, spec, bbga::optimum(spec), options);
      for (const auto& t : r.trace)
        std::cout << "trace generation=" << t.generation << " evaluations=" << t.evaluations
                  << " best=" << t.best_fitness << '\n';
      std::cout << "evaluations=" << r.evaluations << " generations=" << r.generations
                << " success=" << (r.success ? "true" : "false") << " seed=" << r.seed
                << " best_fitness=" << r.best_fitness.to_string() << '\n';
      return 0;
    }

    if (*sweep) {
      bbga::SweepSpec spec;
      spec.function = bbga::FunctionRecipe::parse(sweep_opts.function);
      spec.n = sweep_opts.n;
      spec.algorithm = bbga::AlgorithmSpec::parse(sweep_opts.algo);
      spec.grid = bbga::CGrid::parse(c_grid);
      spec.runs = sweep_runs;
      spec.base_seed = sweep_opts.seed;
      spec.budget = sweep_opts.budget;
      spec.workers = sweep_opts.workers;
      spec.out = out;
      const auto table = bbga::run_sweep(spec);
      if (out.empty()) std::cout << table.to_csv();
      return 0;
    }

    if (*cmp) {
      bbga::CompareSpec spec;
      spec.function = bbga::FunctionRecipe::parse(cmp_opts.function);
      spec.n = cmp_opts.n;
      spec.a = bbga::AlgorithmSpec::parse(cmp_opts.algo);
      spec.b = bbga::AlgorithmSpec::parse(algo_b);
      spec.c = cmp_c;
      spec.runs = cmp_runs;
      spec.base_seed = cmp_opts.seed;
      spec.budget = cmp_opts.budget;
      spec.workers = cmp_opts.workers;
      spec.sided = bbga::parse_sidedness(sided);
      const auto r = bbga::compare(spec);
      std::cout << "a=" << spec.a.to_string() << " mean_a=" << r.mean_a
                << " b=" << spec.b.to_string() << " mean_b=" << r.mean_b << '\n'
                << r.mwu.to_string() << '\n'
                << "sided=" << bbga::to_string(spec.sided) << " p=" << r.p_value
                << " significant=" << (r.p_value < alpha ? "yes" : "no") << '\n';
      return 0;
    }

    if (*theory) {
      if (list) {
        for (const auto& f : bbga::theory::formula_registry()) {
          std::cout << f.id;
          for (const auto& p : f.params) std::cout << ' ' << p << "=<value>";
          std::cout << '\n';
        }
        return 0;
      }
      if (formula.empty()) throw std::invalid_argument("theory: missing formula id (see --list)");
      std::cout << bbga::theory::theory_report(formula, formula_args) << '\n';
      return 0;
    }

    if (*mwu) {
      const auto a = read_column(file_a);
      const auto b = read_column(file_b);
      const auto side = bbga::parse_sidedness(mwu_sided);
      const auto r = bbga::stats::mann_whitney_u(
          a, b, exact ? bbga::stats::MWUMode::Exact : bbga::stats::MWUMode::Approx);
      const double p = side == bbga::Sidedness::TwoSided ? r.p_value_two_sided
                       : side == bbga::Sidedness::ALess  ? r.p_value_one_sided_first_less
                                                         : r.p_value_one_sided_first_greater;
      std::cout << r.to_string() << " sided=" << mwu_sided << " p=" << p << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
