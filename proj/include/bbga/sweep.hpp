#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bbga/engine.hpp"
#include "bbga/fitness.hpp"
#include "bbga/stats.hpp"

namespace bbga {

/// Algorithm mini-language:
///   ea
///   greedy2+1[:uniform|1pt|2pt][:dup-rnd|dup-old]
///   ga[:key=value,...] with keys mu, lambda, pc, xover (uniform|kpoint:<k>),
///                      sel (uniform|greedy), tie (dup-rnd|dup-old)
/// ga defaults: mu=2, lambda=1, pc=1, xover=uniform, sel=uniform, tie=dup-rnd.
struct AlgorithmSpec {
  enum class Family { EA, Greedy2Plus1, GA };

  Family family = Family::EA;
  std::size_t mu = 1;
  std::size_t lambda = 1;
  double p_c = 0.0;
  CrossoverKind crossover = CrossoverKind::uniform();
  ParentSelectionKind selection = ParentSelectionKind::UniformOverPopulation;
  TieBreakKind tiebreak = TieBreakKind::DupNew;

  /// Throws std::invalid_argument with the offending character position.
  static AlgorithmSpec parse(std::string_view text);
  std::string to_string() const;

  /// Full configuration for length n and mutation rate p.
  GAConfig configure(std::size_t n, double p, std::uint64_t budget, std::uint64_t seed) const;

  friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

/// Mutation-rate grid c = start, start+step, ..., end (p = c/n). Each value
/// is rounded to 10 decimals so that 0.1:0.1:4 yields 0.3 rather than
/// 0.30000000000000004.
struct CGrid {
  double start = 1.0;
  double step = 1.0;
  double end = 1.0;

  static CGrid parse(std::string_view text);
  std::vector<double> values() const;
};

struct SweepSpec {
  FunctionRecipe function;
  std::size_t n = 0;
  AlgorithmSpec algorithm;
  CGrid grid;
  std::size_t runs = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::size_t workers = 1;  ///< 0 means one per hardware thread
  std::string out;          ///< CSV destination; empty means no file
};

struct SweepRow {
  double c = 0.0;
  std::size_t runs = 0;
  std::size_t successes = 0;
  std::size_t censored = 0;
  /// Statistics over successful runs only; NaN when there are none.
  double mean = 0.0, std = 0.0, min = 0.0, median = 0.0, max = 0.0;

  friend bool operator==(const SweepRow& a, const SweepRow& b);
};

struct SweepTable {
  std::vector<SweepRow> rows;  ///< ascending in c

  static constexpr std::string_view kHeader = "c,runs,successes,censored,mean,std,min,median,max";

  std::string to_csv() const;
  static SweepTable from_csv(std::string_view text);
  friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

struct RunOutcome {
  std::uint64_t evaluations = 0;
  bool success = false;
};

/// Evaluation counts of successful runs, in run order.
std::vector<double> successful_evaluations(const std::vector<RunOutcome>& outcomes);

/// Runs every grid point `runs` times. Run j at grid index i uses seed
/// seed_mix(base_seed, i, j); random function families use instance key j,
/// so every rate sees the same sequence of functions. The result does not
/// depend on the worker count. When spec.out is set the CSV is written there;
/// the file is opened before any run starts, and failures throw.
SweepTable run_sweep(const SweepSpec& spec);

/// Runs only the grid point with mutation rate c/n; the building block of
/// run_sweep, exposed for experiments that need the raw outcomes.
std::vector<RunOutcome> run_point(const FunctionRecipe& function, std::size_t n,
                                  const AlgorithmSpec& algorithm, double c,
                                  std::size_t runs, std::uint64_t base_seed,
                                  std::uint64_t domain, std::uint64_t budget,
                                  std::size_t workers, bool key_by_seed = false);

enum class Sidedness { TwoSided, ALess, BLess };
Sidedness parse_sidedness(std::string_view text);
std::string to_string(Sidedness s);

struct CompareSpec {
  FunctionRecipe function;
  std::size_t n = 0;
  AlgorithmSpec a;
  AlgorithmSpec b;
  double c = 1.0;
  std::size_t runs = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t budget = kDefaultBudget;
  std::size_t workers = 1;
  Sidedness sided = Sidedness::TwoSided;
};

struct CompareResult {
  stats::MWUResult mwu;
  double p_value = 1.0;  ///< the p-value for the requested sidedness
  std::vector<RunOutcome> a;
  std::vector<RunOutcome> b;
  double mean_a = 0.0;  ///< mean evaluations including censored runs at their budget count
  double mean_b = 0.0;
};

/// Side s (0 for a, 1 for b) uses seeds seed_mix(base_seed, s, run) for the
/// run and for random function instances, so the samples are independent.
/// The U test runs on all evaluation counts; censored runs enter with the
/// count at which they stopped.
CompareResult compare(const CompareSpec& spec);

/// Runs fn(i) for i in [0, count) on up to `workers` threads (0 = hardware
/// concurrency). The first exception thrown by any job is rethrown.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace bbga
