#include "bbga/engine.hpp"

#include <stdexcept>
#include <utility>

namespace bbga {

void GAConfig::validate() const {
  auto reject = [](const std::string& what) {
    throw std::invalid_argument("invalid GA configuration: " + what);
  };
  if (n == 0) reject("n must be positive");
  if (mu == 0) reject("mu must be at least 1");
  if (lambda == 0) reject("lambda must be at least 1");
  if (!(p > 0.0 && p < 1.0)) reject("mutation rate must lie in (0, 1)");
  if (!(p_c >= 0.0 && p_c <= 1.0)) reject("crossover probability must lie in [0, 1]");
  if (crossover.type == CrossoverKind::Type::KPoint && p_c > 0.0 &&
      (n < 2 || crossover.k < 1 || crossover.k > n - 1))
    reject("k-point crossover needs 1 <= k <= n-1");
  if (budget < mu) reject("budget must cover the initial population");
}

std::string GAConfig::describe() const {
  return "(" + std::to_string(mu) + "+" + std::to_string(lambda) + ") n=" +
         std::to_string(n) + " p=" + std::to_string(p) + " pc=" + std::to_string(p_c) +
         " xover=" + crossover.to_string() + " sel=" + to_string(selection) +
         " tie=" + to_string(tiebreak);
}

GAConfig make_greedy_2plus1(std::size_t n, double p, CrossoverKind crossover,
                            TieBreakKind tiebreak) {
  GAConfig c;
  c.n = n;
  c.mu = 2;
  c.lambda = 1;
  c.p = p;
  c.p_c = 1.0;
  c.crossover = crossover;
  c.selection = ParentSelectionKind::GreedyOverBest;
  c.tiebreak = tiebreak;
  return c;
}

GAConfig make_one_plus_one_ea(std::size_t n, double p) {
  GAConfig c;
  c.n = n;
  c.mu = 1;
  c.lambda = 1;
  c.p = p;
  c.p_c = 0.0;
  c.selection = ParentSelectionKind::UniformOverPopulation;
  c.tiebreak = TieBreakKind::DupNew;
  return c;
}

std::vector<std::string> kpoint_regime_violations(const GAConfig& config) {
  std::vector<std::string> out;
  if (config.mu < 2) out.emplace_back("mu must be at least 2");
  if (config.lambda >= config.mu) out.emplace_back("lambda must be smaller than mu");
  if (config.tiebreak != TieBreakKind::DupOld) out.emplace_back("tie-break must be dup-old");
  if (config.crossover.type != CrossoverKind::Type::KPoint)
    out.emplace_back("crossover must be k-point");
  else if (config.crossover.k < 1 || config.n < 3 || config.crossover.k > config.n - 2)
    out.emplace_back("k must lie in [1, n-2]");
  if (!(config.p_c > 0.0 && config.p_c < 1.0))
    out.emplace_back("crossover probability must lie strictly between 0 and 1");
  return out;
}

namespace {

const FitnessValue& best_of(std::span<const Individual> population) {
  const FitnessValue* best = &population.front().fitness;
  for (const auto& ind : population)
    if (ind.fitness > *best) best = &ind.fitness;
  return *best;
}

}  // namespace

RunResult run_ga(const GAConfig& config, const FitnessSpec& spec,
                 const FitnessValue& optimum, const RunOptions& options) {
  config.validate();
  if (spec.n() != config.n)
    throw std::invalid_argument("run_ga: function length does not match configuration");
  if (!options.initial_population.empty() &&
      options.initial_population.size() != config.mu)
    throw std::invalid_argument("run_ga: initial population must hold mu genotypes");

  const std::size_t mu = config.mu;
  const std::size_t lambda = config.lambda;
  Stream rng(config.seed);
  IncrementalEvaluator evaluator(spec);
  VariationScratch scratch;
  RunObserver* observer = options.observer;

  RunResult result;
  result.seed = config.seed;

  // pool[0, mu) is the population, pool[mu, mu+lambda) the offspring slots.
  std::vector<Individual> pool(mu + lambda);
  std::vector<Individual> spare(mu + lambda);
  for (std::size_t i = mu; i < mu + lambda; ++i) pool[i].genotype = Bitstring(config.n);

  bool found = false;
  for (std::size_t i = 0; i < mu; ++i) {
    Individual& ind = pool[i];
    ind.genotype = options.initial_population.empty()
                       ? Bitstring::random(config.n, rng)
                       : options.initial_population[i];
    if (ind.genotype.size() != config.n)
      throw std::invalid_argument("run_ga: initial genotype has wrong length");
    ind.fitness = evaluator.full(ind.genotype);
    ind.birth_generation = 0;
    found = found || ind.fitness >= optimum;
  }
  result.evaluations = mu;
  auto population = [&] { return std::span<const Individual>(pool.data(), mu); };
  auto finish = [&](bool success, const FitnessValue* latest) {
    result.success = success;
    result.best_fitness = best_of(population());
    if (latest != nullptr && *latest > result.best_fitness) result.best_fitness = *latest;
    return result;
  };
  if (found) return finish(true, nullptr);
  if (result.evaluations >= config.budget) return finish(false, nullptr);

  if (options.trace_stride > 0)
    result.trace.push_back({0, result.evaluations, best_of(population()).to_double()});

  std::vector<std::size_t> chosen;
  std::vector<char> taken(mu + lambda);
  Bitstring recombined;
  const bool incremental = options.incremental;

  for (std::uint64_t gen = 1;; ++gen) {
    result.generations = gen;
    for (std::size_t j = 0; j < lambda; ++j) {
      Individual& child = pool[mu + j];
      const bool cross = coin(rng, config.p_c);
      const std::size_t a = select_parent_index(population(), config.selection, rng);
      std::size_t b = a;
      if (cross) {
        b = select_parent_index(population(), config.selection, rng);
        crossover_into(config.crossover, pool[a].genotype, pool[b].genotype,
                       child.genotype, scratch, rng);
        if (observer != nullptr) recombined = child.genotype;
      } else {
        child.genotype = pool[a].genotype;
      }
      mutate_in_place(child.genotype, config.p, rng);
      child.fitness = incremental
                          ? evaluator.from_parent(pool[a].genotype, pool[a].fitness,
                                                  child.genotype)
                          : evaluator.full(child.genotype);
      child.birth_generation = gen;
      ++result.evaluations;

      if (observer != nullptr) {
        OffspringEvent ev;
        ev.generation = gen;
        ev.parent1 = &pool[a];
        ev.parent2 = cross ? &pool[b] : nullptr;
        ev.recombined = cross ? &recombined : nullptr;
        ev.offspring = &child;
        observer->on_offspring(ev);
      }
      if (child.fitness >= optimum) return finish(true, &child.fitness);
      if (result.evaluations >= config.budget) return finish(false, &child.fitness);
    }

    survivor_indices_into(pool, mu, config.tiebreak, rng, scratch, chosen);
    std::fill(taken.begin(), taken.end(), 0);
    std::size_t slot = 0;
    for (auto idx : chosen) {
      spare[slot++] = std::move(pool[idx]);
      taken[idx] = 1;
    }
    for (std::size_t idx = 0; idx < pool.size(); ++idx)
      if (!taken[idx]) spare[slot++] = std::move(pool[idx]);
    std::swap(pool, spare);

    if (observer != nullptr) observer->on_generation(gen, population());
    if (options.trace_stride > 0 && gen % options.trace_stride == 0)
      result.trace.push_back({gen, result.evaluations, best_of(population()).to_double()});
  }
}

}  // namespace bbga
