#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bbga/bitstring.hpp"
#include "bbga/rng.hpp"

// Closed-form running-time bounds and probabilities for the (mu+lambda) GA
// family on OneMax, each paired in the tests with an enumeration oracle.
// Terms with unspecified constants are never given a numeric value; reports
// that drop them carry dominant_only = true.

namespace bbga::theory {

struct BoundReport {
  double value = 0.0;
  std::string formula_id;
  bool dominant_only = false;
  /// For bounds with an additive O(.) remainder: the remainder's shape with
  /// its unknown constant set to 1. Informational only, never added to value.
  std::optional<double> remainder_shape;
};

/// Exact non-negative fraction, always reduced.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::uint64_t num, std::uint64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// ---------------------------------------------------------------------------
// Running-time bounds

/// Lower bound for every EA that only uses standard bit mutation with rate p:
///   (min{ln n, ln(1/(p^2 n))} - ln ln n - 3) / (p (1-p)^n),
/// valid for n >= 2 and 2^(-n/3) <= p <= 1/(sqrt(n) ln n).
BoundReport lb_mutation_based(std::size_t n, double p);

/// n ln n / (c e^(-c) (1+c)): the leading term for mutation rate c/n.
BoundReport ub_ga_dominant(double n, double c);

/// (ln(n^2 p + n) + 1 + p) / (p (1-p)^(n-1) (1 + np)). The remainder
/// (mu+lambda) n log mu / (1-p)^n is reported as remainder_shape.
BoundReport ub_ga_full(double n, double p, std::size_t mu, std::size_t lambda);

/// Matching lower bound for the greedy (2+1) GA with any mask-based
/// crossover, leading term only. Requires 0 < c <= 4.
BoundReport lb_greedy_ga_dominant(double n, double c);

struct MaxTerm {
  double value = 0.0;
  unsigned k = 0;
};
/// max over k >= 1 of c^k / (k! k!), scanning k upward until the terms fall.
MaxTerm max_term(double c);

/// 1 / (c e^(-c) (1+c)), the n ln n coefficient at rate c/n.
double runtime_coefficient(double c);

/// Argmin of runtime_coefficient: (1 + sqrt 5) / 2. The first call also
/// scans (0, 4] at step 1e-6 and throws std::logic_error if the scan
/// disagrees with the closed form.
double optimal_c();

/// Argmin of runtime_coefficient found by scanning (0, upper] at `step`.
double scan_optimal_c(double step = 1e-6, double upper = 4.0);

// ---------------------------------------------------------------------------
// k-point crossover: odd number of separating cutting points

/// P(N, d, k): probability that k cutting points drawn without replacement
/// from N sites hit an odd number of d designated sites. Exact rational;
/// requires N <= 64, 0 <= d <= N, 1 <= k <= N-1 (d = 0 gives 0).
Rational separating_odd_exact(std::size_t N, std::size_t d, std::size_t k);

/// Same probability as a double for any N; exact below N = 65 and summed in
/// log space above.
double separating_odd_probability(std::size_t N, std::size_t d, std::size_t k);

/// Enumerates all C(N, k) cut sets. Requires N <= 20.
Rational separating_odd_bruteforce(std::size_t N, std::size_t d, std::size_t k);

/// d(N-d) / (N(N-1)).
double separating_odd_lower_bound(std::size_t N, std::size_t d);

// ---------------------------------------------------------------------------
// Uniform crossover surplus

/// P(Bin(2d, 1/2) > d) = (1 - 2^(-2d) C(2d, d)) / 2, via the ratio form of
/// the central term. Requires d >= 1.
double surplus_prob(std::size_t d);

// ---------------------------------------------------------------------------
// Neutral mutations

/// Probability that standard bit mutation of a string with i ones creates a
/// different string with i ones. Requires 1 <= i <= n-1, 0 < p <= 1/2.
double neutral_mutation_prob_exact(std::size_t n, std::size_t i, double p);

/// Same, by enumerating all 2^n masks on one parent. Requires n <= 20.
double neutral_mutation_prob_bruteforce(std::size_t n, std::size_t i, double p);

struct NeutralBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// True when i(n-i)p^2/(1-p)^2 <= 1/2, the condition for the upper bound.
  bool upper_applies = false;
};
NeutralBounds neutral_mutation_bounds(std::size_t n, std::size_t i, double p);

// ---------------------------------------------------------------------------
// Jumps onto a fitness level from below

/// p (n-i+1) e^((pn)^2/4 + 1). Requires 0 < p < 1, 1 <= i <= n.
BoundReport jump_prob_bound(std::size_t n, std::size_t i, double p);

/// max over parent levels j < i of P(mutation of a level-j parent has i ones),
/// from the binomial sum.
double jump_prob_exact(std::size_t n, std::size_t i, double p);

/// Entry i: max over every parent with fewer than i ones of the probability
/// that standard bit mutation yields exactly i ones, by enumerating all
/// parents and masks. Entry 0 is 0. Requires n <= 14.
std::vector<double> jump_prob_bruteforce_table(std::size_t n, double p);

// ---------------------------------------------------------------------------
// Distance between the two flipped bits of a neutral two-bit mutation

struct DominanceReport {
  std::size_t n = 0;
  std::size_t ones = 0;
  std::size_t samples = 0;
  /// differences[t-1] = P(min{d, n-d} >= t) - (n/4 - t + 1)/(n/4), t = 1..n/4.
  std::vector<double> differences;
  double min_difference = 0.0;
  bool holds(double eps) const { return min_difference >= -eps; }
};

/// Monte-Carlo estimate on one random genotype with i ones. Requires n a
/// multiple of 4, 1 <= i <= n-1, samples >= 10^4.
DominanceReport distance_dominance_check(std::size_t n, std::size_t i,
                                         std::size_t samples, Stream& rng);

/// Exact distribution for a given genotype over all (one-bit, zero-bit) pairs.
DominanceReport distance_dominance_exact(const Bitstring& x);

/// Exact check over every genotype of length n with i ones, in integer
/// arithmetic. Returns true when dominance holds for all of them.
bool distance_dominance_exhaustive(std::size_t n, std::size_t i);

// ---------------------------------------------------------------------------
// Registry for command-line evaluation

struct FormulaInfo {
  std::string id;
  std::vector<std::string> params;
};

const std::vector<FormulaInfo>& formula_registry();

/// Evaluates `id` with `name=value` arguments and returns the line
/// `id,name=value,...,value,dominant_only`. Unknown ids are rejected with the
/// list of known ones; missing, repeated or unknown parameters are rejected.
std::string theory_report(const std::string& id, const std::vector<std::string>& args);

}  // namespace bbga::theory
