#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bbga/fitness.hpp"
#include "bbga/variation.hpp"

namespace bbga {

inline constexpr std::uint64_t kDefaultBudget = 1'000'000'000;

struct GAConfig {
  std::size_t n = 0;
  std::size_t mu = 1;
  std::size_t lambda = 1;
  double p = 0.0;    ///< mutation rate, 0 < p < 1
  double p_c = 0.0;  ///< crossover probability
  CrossoverKind crossover = CrossoverKind::uniform();
  ParentSelectionKind selection = ParentSelectionKind::UniformOverPopulation;
  TieBreakKind tiebreak = TieBreakKind::DupRnd;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
  std::string describe() const;
};

/// Greedy (2+1) GA: mu=2, lambda=1, always crossover, parents drawn
/// uniformly from the current best individuals.
GAConfig make_greedy_2plus1(std::size_t n, double p,
                            CrossoverKind crossover = CrossoverKind::uniform(),
                            TieBreakKind tiebreak = TieBreakKind::DupRnd);

/// (1+1) EA: mu=1, lambda=1, no crossover; the offspring replaces the parent
/// unless it is strictly worse.
GAConfig make_one_plus_one_ea(std::size_t n, double p);

/// Conditions for the k-point crossover guarantee with dup-old tie-breaking
/// that can be checked at finite n: 2 <= mu, lambda < mu, dup-old,
/// k-point crossover with 1 <= k <= n-2, 0 < p_c < 1. Empty when satisfied.
std::vector<std::string> kpoint_regime_violations(const GAConfig& config);

struct TracePoint {
  std::uint64_t generation = 0;
  std::uint64_t evaluations = 0;
  double best_fitness = 0.0;
};

struct RunResult {
  std::uint64_t evaluations = 0;  ///< evaluations up to and including the first optimal one
  std::uint64_t generations = 0;  ///< generations started (the last one possibly partial)
  bool success = false;
  std::uint64_t seed = 0;
  FitnessValue best_fitness;
  std::vector<TracePoint> trace;

  friend bool operator==(const RunResult& a, const RunResult& b) {
    if (a.trace.size() != b.trace.size()) return false;
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      const auto &x = a.trace[i], &y = b.trace[i];
      if (x.generation != y.generation || x.evaluations != y.evaluations ||
          x.best_fitness != y.best_fitness)
        return false;
    }
    return a.evaluations == b.evaluations && a.generations == b.generations &&
           a.success == b.success && a.seed == b.seed && a.best_fitness == b.best_fitness;
  }
};

/// One offspring creation, reported after evaluation.
struct OffspringEvent {
  std::uint64_t generation = 0;
  const Individual* parent1 = nullptr;
  const Individual* parent2 = nullptr;  ///< null when no crossover was performed
  const Bitstring* recombined = nullptr;  ///< crossover result before mutation, or null
  const Individual* offspring = nullptr;
};

/// Hooks for checking run invariants from tests and tools.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_offspring(const OffspringEvent& /*event*/) {}
  /// Called after environmental selection with the new population.
  virtual void on_generation(std::uint64_t /*generation*/,
                             std::span<const Individual> /*population*/) {}
};

struct RunOptions {
  /// Starting genotypes; when non-empty it must hold exactly mu strings.
  std::vector<Bitstring> initial_population;
  RunObserver* observer = nullptr;
  /// Record the best fitness every `trace_stride` generations (0 = off).
  std::uint64_t trace_stride = 0;
  /// Use delta evaluation where the function supports it.
  bool incremental = true;
};

/// Runs the (mu+lambda) GA until a genotype with fitness >= optimum is
/// evaluated or the evaluation budget is spent. Initialisation costs mu
/// evaluations. Deterministic in (config, spec, options).
RunResult run_ga(const GAConfig& config, const FitnessSpec& spec,
                 const FitnessValue& optimum, const RunOptions& options = {});

}  // namespace bbga
