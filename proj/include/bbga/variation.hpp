#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bbga/bitstring.hpp"
#include "bbga/fitness.hpp"
#include "bbga/rng.hpp"

namespace bbga {

struct Individual {
  Bitstring genotype;
  FitnessValue fitness;
  std::uint64_t birth_generation = 0;
};

struct CrossoverKind {
  enum class Type { Uniform, KPoint };
  Type type = Type::Uniform;
  std::size_t k = 0;

  static CrossoverKind uniform() { return {Type::Uniform, 0}; }
  static CrossoverKind k_point(std::size_t k) { return {Type::KPoint, k}; }
  std::string to_string() const;

  friend bool operator==(const CrossoverKind&, const CrossoverKind&) = default;
};

/// Rule for ties left after comparing fitness and duplicate counts.
enum class TieBreakKind {
  DupRnd,  ///< uniformly at random
  DupOld,  ///< older individuals first (smaller birth generation), then random
  DupNew,  ///< newer individuals first, then random; gives the textbook
           ///< "accept if not worse" rule of the (1+1) EA
};

enum class ParentSelectionKind { UniformOverPopulation, GreedyOverBest };

std::string to_string(TieBreakKind kind);
std::string to_string(ParentSelectionKind kind);

// ---------------------------------------------------------------------------
// Mutation

/// Flips each gene independently with probability p. Returns the new string;
/// the input is untouched.
Bitstring standard_bit_mutation(const Bitstring& x, double p, Stream& rng);

/// In-place standard bit mutation. Flip positions are generated by geometric
/// skipping, so the cost is proportional to the number of flips. Returns the
/// number of flipped genes.
std::size_t mutate_in_place(Bitstring& x, double p, Stream& rng);

// ---------------------------------------------------------------------------
// Crossover

/// Each gene taken from x1 or x2 with probability 1/2.
Bitstring uniform_crossover(const Bitstring& x1, const Bitstring& x2, Stream& rng);

/// k distinct cutting points from {1, ..., n-1}, sorted ascending. A cutting
/// point a splits the string after its a-th gene.
std::vector<std::size_t> sample_cut_points(std::size_t n, std::size_t k, Stream& rng);

/// Assembles segments from alternating parents, starting with x1, switching
/// after every cutting point in `cuts` (sorted, within [1, n-1]).
Bitstring splice(const Bitstring& x1, const Bitstring& x2,
                 std::span<const std::size_t> cuts);

/// k-point crossover; requires 1 <= k <= n-1.
Bitstring k_point_crossover(const Bitstring& x1, const Bitstring& x2, std::size_t k,
                            Stream& rng);

/// Scratch space reused across offspring creations in one run.
struct VariationScratch {
  std::vector<Bitstring::Word> mask;
  std::vector<std::size_t> cuts;
  std::vector<std::size_t> order;
  std::vector<std::uint32_t> duplicates;
  std::vector<std::uint64_t> tie_keys;
};

/// Writes crossover(x1, x2) into `out`, which must already have length n.
void crossover_into(const CrossoverKind& kind, const Bitstring& x1, const Bitstring& x2,
                    Bitstring& out, VariationScratch& scratch, Stream& rng);

// ---------------------------------------------------------------------------
// Selection

/// UniformOverPopulation: uniform over slots. GreedyOverBest: uniform over the
/// slots holding the maximum fitness.
std::size_t select_parent_index(std::span<const Individual> population,
                                ParentSelectionKind kind, Stream& rng);
const Individual& select_parent(std::span<const Individual> population,
                                ParentSelectionKind kind, Stream& rng);

/// Cut selection over `pool`: indices of the mu survivors, in admission order.
/// Admission order is fitness descending, then number of identical genotypes
/// in the pool ascending, then the tie-break rule.
std::vector<std::size_t> survivor_indices(std::span<const Individual> pool, std::size_t mu,
                                          TieBreakKind tiebreak, Stream& rng);
void survivor_indices_into(std::span<const Individual> pool, std::size_t mu,
                           TieBreakKind tiebreak, Stream& rng, VariationScratch& scratch,
                           std::vector<std::size_t>& out);

/// Keeps mu individuals out of parents ∪ offspring (see survivor_indices).
std::vector<Individual> environmental_selection(std::span<const Individual> parents,
                                                std::span<const Individual> offspring,
                                                std::size_t mu, TieBreakKind tiebreak,
                                                Stream& rng);

}  // namespace bbga
