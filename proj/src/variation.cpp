#include "bbga/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bbga/kernels.hpp"

namespace bbga {

std::string CrossoverKind::to_string() const {
  if (type == Type::Uniform) return "uniform";
  return "kpoint:" + std::to_string(k);
}

std::string to_string(TieBreakKind kind) {
  switch (kind) {
    case TieBreakKind::DupRnd:
      return "dup-rnd";
    case TieBreakKind::DupOld:
      return "dup-old";
    case TieBreakKind::DupNew:
      return "dup-new";
  }
  return "?";
}

std::string to_string(ParentSelectionKind kind) {
  return kind == ParentSelectionKind::GreedyOverBest ? "greedy" : "uniform";
}

// ---------------------------------------------------------------------------
// Mutation

std::size_t mutate_in_place(Bitstring& x, double p, Stream& rng) {
  const std::size_t n = x.size();
  if (p <= 0.0 || n == 0) return 0;
  if (p >= 1.0) {
    x = x.complement();
    return n;
  }
  // Gaps between flips are Geometric(p): floor(ln U / ln(1 - p)), U in (0, 1].
  const double log_keep = std::log1p(-p);
  std::size_t flips = 0;
  double pos = -1.0;
  for (;;) {
    const double u = 1.0 - uniform01(rng);
    pos += std::floor(std::log(u) / log_keep) + 1.0;
    if (pos >= static_cast<double>(n)) break;
    x.flip(static_cast<std::size_t>(pos));
    ++flips;
  }
  return flips;
}

Bitstring standard_bit_mutation(const Bitstring& x, double p, Stream& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("mutation: rate must lie in [0, 1]");
  Bitstring y(x);
  mutate_in_place(y, p, rng);
  return y;
}

// ---------------------------------------------------------------------------
// Crossover

namespace {

void require_same_length(const Bitstring& a, const Bitstring& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("crossover: parents differ in length");
}

void set_range(std::vector<Bitstring::Word>& mask, std::size_t from, std::size_t to) {
  constexpr std::size_t W = Bitstring::kWordBits;
  while (from < to) {
    const std::size_t w = from / W;
    const std::size_t off = from % W;
    const std::size_t take = std::min(to - from, W - off);
    const Bitstring::Word bits =
        (take == W ? ~Bitstring::Word{0} : ((Bitstring::Word{1} << take) - 1)) << off;
    mask[w] |= bits;
    from += take;
  }
}

void sample_cuts_into(std::size_t n, std::size_t k, Stream& rng,
                      std::vector<std::size_t>& cuts) {
  const std::size_t sites = n - 1;
  cuts.clear();
  if (k <= 32) {
    // Floyd's algorithm over {0, ..., sites-1}.
    for (std::size_t j = sites - k; j < sites; ++j) {
      const std::size_t t = uniform_below(rng, j + 1);
      if (std::find(cuts.begin(), cuts.end(), t + 1) == cuts.end())
        cuts.push_back(t + 1);
      else
        cuts.push_back(j + 1);
    }
    std::sort(cuts.begin(), cuts.end());
  } else {
    // Selection sampling (Knuth's Algorithm S) yields sorted output directly.
    std::size_t needed = k;
    for (std::size_t site = 0; site < sites && needed > 0; ++site) {
      if (uniform_below(rng, sites - site) < needed) {
        cuts.push_back(site + 1);
        --needed;
      }
    }
  }
}

void splice_into(const Bitstring& x1, const Bitstring& x2,
                 std::span<const std::size_t> cuts, Bitstring& out,
                 std::vector<Bitstring::Word>& mask) {
  mask.assign(x1.word_count(), 0);
  // Odd-numbered segments come from x2.
  for (std::size_t s = 0; s < cuts.size(); s += 2) {
    const std::size_t to = s + 1 < cuts.size() ? cuts[s + 1] : x1.size();
    set_range(mask, cuts[s], to);
  }
  kernels::active().blend(x1.words().data(), x2.words().data(), mask.data(),
                          out.words().data(), x1.word_count());
}

void validate_cuts(std::size_t n, std::span<const std::size_t> cuts) {
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    if (cuts[j] < 1 || cuts[j] > n - 1)
      throw std::invalid_argument("splice: cutting point outside [1, n-1]");
    if (j > 0 && cuts[j] <= cuts[j - 1])
      throw std::invalid_argument("splice: cutting points must be strictly increasing");
  }
}

}  // namespace

Bitstring uniform_crossover(const Bitstring& x1, const Bitstring& x2, Stream& rng) {
  require_same_length(x1, x2);
  Bitstring out(x1.size());
  VariationScratch scratch;
  crossover_into(CrossoverKind::uniform(), x1, x2, out, scratch, rng);
  return out;
}

std::vector<std::size_t> sample_cut_points(std::size_t n, std::size_t k, Stream& rng) {
  if (n < 2 || k < 1 || k > n - 1)
    throw std::invalid_argument("k-point crossover: k must lie in [1, n-1]");
  std::vector<std::size_t> cuts;
  sample_cuts_into(n, k, rng, cuts);
  return cuts;
}

Bitstring splice(const Bitstring& x1, const Bitstring& x2,
                 std::span<const std::size_t> cuts) {
  require_same_length(x1, x2);
  validate_cuts(x1.size(), cuts);
  Bitstring out(x1.size());
  std::vector<Bitstring::Word> mask;
  splice_into(x1, x2, cuts, out, mask);
  return out;
}

Bitstring k_point_crossover(const Bitstring& x1, const Bitstring& x2, std::size_t k,
                            Stream& rng) {
  require_same_length(x1, x2);
  Bitstring out(x1.size());
  VariationScratch scratch;
  crossover_into(CrossoverKind::k_point(k), x1, x2, out, scratch, rng);
  return out;
}

void crossover_into(const CrossoverKind& kind, const Bitstring& x1, const Bitstring& x2,
                    Bitstring& out, VariationScratch& scratch, Stream& rng) {
  const std::size_t words = x1.word_count();
  if (kind.type == CrossoverKind::Type::Uniform) {
    scratch.mask.resize(words);
    for (auto& w : scratch.mask) w = rng();
    kernels::active().blend(x1.words().data(), x2.words().data(), scratch.mask.data(),
                            out.words().data(), words);
    return;
  }
  const std::size_t n = x1.size();
  if (n < 2 || kind.k < 1 || kind.k > n - 1)
    throw std::invalid_argument("k-point crossover: k must lie in [1, n-1]");
  sample_cuts_into(n, kind.k, rng, scratch.cuts);
  splice_into(x1, x2, scratch.cuts, out, scratch.mask);
}

// ---------------------------------------------------------------------------
// Selection

std::size_t select_parent_index(std::span<const Individual> population,
                                ParentSelectionKind kind, Stream& rng) {
  if (population.empty()) throw std::invalid_argument("select_parent: empty population");
  if (kind == ParentSelectionKind::UniformOverPopulation || population.size() == 1)
    return uniform_below(rng, population.size());

  std::size_t best_count = 0;
  const FitnessValue* best = nullptr;
  for (const auto& ind : population) {
    if (best == nullptr || ind.fitness > *best) {
      best = &ind.fitness;
      best_count = 1;
    } else if (ind.fitness == *best) {
      ++best_count;
    }
  }
  std::size_t pick = best_count == 1 ? 0 : uniform_below(rng, best_count);
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (population[i].fitness == *best) {
      if (pick == 0) return i;
      --pick;
    }
  }
  throw std::logic_error("select_parent: unreachable");
}

const Individual& select_parent(std::span<const Individual> population,
                                ParentSelectionKind kind, Stream& rng) {
  return population[select_parent_index(population, kind, rng)];
}

void survivor_indices_into(std::span<const Individual> pool, std::size_t mu,
                           TieBreakKind tiebreak, Stream& rng, VariationScratch& scratch,
                           std::vector<std::size_t>& out) {
  const std::size_t size = pool.size();
  if (mu == 0) throw std::invalid_argument("environmental selection: mu must be positive");
  if (size < mu)
    throw std::invalid_argument("environmental selection: fewer candidates than mu");

  // Duplicate counts over the whole pool, computed once up front.
  auto& dup = scratch.duplicates;
  dup.assign(size, 1);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      if (pool[i].fitness == pool[j].fitness && pool[i].genotype == pool[j].genotype) {
        ++dup[i];
        ++dup[j];
      }
    }
  }
  auto& keys = scratch.tie_keys;
  keys.resize(size);
  for (auto& k : keys) k = rng();

  auto& order = scratch.order;
  order.resize(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto before = [&](std::size_t a, std::size_t b) {
    const auto cmp = pool[a].fitness <=> pool[b].fitness;
    if (cmp != 0) return cmp > 0;
    if (dup[a] != dup[b]) return dup[a] < dup[b];
    const auto age_a = pool[a].birth_generation;
    const auto age_b = pool[b].birth_generation;
    if (tiebreak == TieBreakKind::DupOld && age_a != age_b) return age_a < age_b;
    if (tiebreak == TieBreakKind::DupNew && age_a != age_b) return age_a > age_b;
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return a < b;
  };
  std::sort(order.begin(), order.end(), before);
  out.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(mu));
}

std::vector<std::size_t> survivor_indices(std::span<const Individual> pool, std::size_t mu,
                                          TieBreakKind tiebreak, Stream& rng) {
  VariationScratch scratch;
  std::vector<std::size_t> out;
  survivor_indices_into(pool, mu, tiebreak, rng, scratch, out);
  return out;
}

std::vector<Individual> environmental_selection(std::span<const Individual> parents,
                                                std::span<const Individual> offspring,
                                                std::size_t mu, TieBreakKind tiebreak,
                                                Stream& rng) {
  if (mu == 0) throw std::invalid_argument("environmental selection: mu must be positive");
  if (parents.size() != mu)
    throw std::invalid_argument("environmental selection: expected mu parents");
  if (offspring.empty())
    throw std::invalid_argument("environmental selection: no offspring");
  std::vector<Individual> pool(parents.begin(), parents.end());
  pool.insert(pool.end(), offspring.begin(), offspring.end());
  const auto chosen = survivor_indices(pool, mu, tiebreak, rng);
  std::vector<Individual> survivors;
  survivors.reserve(mu);
  for (auto i : chosen) survivors.push_back(pool[i]);
  return survivors;
}

}  // namespace bbga
