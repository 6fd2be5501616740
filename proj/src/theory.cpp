#include "bbga/theory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bbga::theory {
namespace {

constexpr std::size_t kExactLimit = 64;

struct PascalTable {
  std::uint64_t c[kExactLimit + 1][kExactLimit + 1] = {};
  constexpr PascalTable() {
    for (std::size_t n = 0; n <= kExactLimit; ++n) {
      c[n][0] = 1;
      for (std::size_t k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
    }
  }
};
constexpr PascalTable kPascal{};

std::uint64_t choose_u64(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  return kPascal.c[n][k];
}

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Binomial coefficient as a double; exact while the value fits 53 bits.
double choose(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  if (n <= kExactLimit) return static_cast<double>(choose_u64(n, k));
  return std::exp(log_choose(static_cast<double>(n), static_cast<double>(k)));
}

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

Rational Rational::make(std::uint64_t num, std::uint64_t den) {
  if (den == 0) reject("rational: zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

// ---------------------------------------------------------------------------
// Running-time bounds

BoundReport lb_mutation_based(std::size_t n, double p) {
  if (n < 2) reject("lb_mutation_based: requires n >= 2");
  const double dn = static_cast<double>(n);
  const double lo = std::pow(2.0, -dn / 3.0);
  const double hi = 1.0 / (std::sqrt(dn) * std::log(dn));
  if (!(p >= lo)) reject("lb_mutation_based: requires p >= 2^(-n/3)");
  if (!(p <= hi)) reject("lb_mutation_based: requires p <= 1/(sqrt(n) ln n)");
  const double head = std::min(std::log(dn), std::log(1.0 / (p * p * dn)));
  const double value = (head - std::log(std::log(dn)) - 3.0) / (p * std::pow(1.0 - p, dn));
  return {value, "lb_mutation_based", false, std::nullopt};
}

double runtime_coefficient(double c) { return 1.0 / (c * std::exp(-c) * (1.0 + c)); }

BoundReport ub_ga_dominant(double n, double c) {
  if (!(c > 0.0)) reject("ub_ga_dominant: requires c > 0");
  return {n * std::log(n) * runtime_coefficient(c), "ub_ga_dominant", true, std::nullopt};
}

BoundReport ub_ga_full(double n, double p, std::size_t mu, std::size_t lambda) {
  if (!(p > 0.0 && p < 1.0)) reject("ub_ga_full: requires 0 < p < 1");
  if (mu < 2) reject("ub_ga_full: requires mu >= 2");
  const double value = (std::log(n * n * p + n) + 1.0 + p) /
                       (p * std::pow(1.0 - p, n - 1.0) * (1.0 + n * p));
  const double remainder = static_cast<double>(mu + lambda) * n *
                           std::log(static_cast<double>(mu)) / std::pow(1.0 - p, n);
  return {value, "ub_ga_full", true, remainder};
}

MaxTerm max_term(double c) {
  if (!(c > 0.0)) reject("max_term: requires c > 0");
  // term(k+1) = term(k) * c / (k+1)^2, and that ratio falls in k, so the
  // first decrease marks the maximum.
  MaxTerm best{c, 1};
  double term = c;
  for (unsigned k = 1;; ++k) {
    const double next = term * c / (static_cast<double>(k + 1) * (k + 1));
    if (next < term) break;
    if (next > best.value) best = {next, k + 1};
    term = next;
  }
  return best;
}

BoundReport lb_greedy_ga_dominant(double n, double c) {
  if (!(c > 0.0)) reject("lb_greedy_ga_dominant: requires c > 0");
  if (c > 4.0) reject("lb_greedy_ga_dominant: requires c <= 4 (maximum at k = 1)");
  const double m = max_term(c).value;
  const double value = n * std::log(n) / (c * std::exp(-c) * (1.0 + m));
  return {value, "lb_greedy_ga_dominant", true, std::nullopt};
}

double scan_optimal_c(double step, double upper) {
  double best_c = step;
  double best = runtime_coefficient(step);
  const auto steps = static_cast<std::size_t>(std::llround(upper / step));
  for (std::size_t j = 2; j <= steps; ++j) {
    const double c = static_cast<double>(j) * step;
    const double v = runtime_coefficient(c);
    if (v < best) {
      best = v;
      best_c = c;
    }
  }
  return best_c;
}

double optimal_c() {
  static const double golden = [] {
    const double c = (1.0 + std::sqrt(5.0)) / 2.0;
    const double scanned = scan_optimal_c(1e-6, 4.0);
    // The objective is flat at the minimum, so allow a few grid steps.
    if (std::abs(scanned - c) > 1e-4)
      throw std::logic_error("optimal_c: scan disagrees with the golden ratio");
    return c;
  }();
  return golden;
}

// ---------------------------------------------------------------------------
// k-point crossover

Rational separating_odd_exact(std::size_t N, std::size_t d, std::size_t k) {
  if (N > kExactLimit) reject("separating_odd_exact: requires N <= 64");
  if (N < 2 || k < 1 || k > N - 1) reject("separating_odd_exact: requires 1 <= k <= N-1");
  if (d > N) reject("separating_odd_exact: requires d <= N");
  if (d == 0) return {0, 1};
  std::uint64_t num = 0;
  for (std::size_t x = 1; x <= std::min(k, d); x += 2)
    num += choose_u64(d, x) * choose_u64(N - d, k - x);
  return Rational::make(num, choose_u64(N, k));
}

double separating_odd_probability(std::size_t N, std::size_t d, std::size_t k) {
  if (N <= kExactLimit) return separating_odd_exact(N, d, k).value();
  if (k < 1 || k > N - 1 || d > N) reject("separating_odd_probability: bad arguments");
  const double total = log_choose(static_cast<double>(N), static_cast<double>(k));
  double sum = 0.0;
  for (std::size_t x = 1; x <= std::min(k, d); x += 2) {
    if (k - x > N - d) continue;
    sum += std::exp(log_choose(static_cast<double>(d), static_cast<double>(x)) +
                    log_choose(static_cast<double>(N - d), static_cast<double>(k - x)) -
                    total);
  }
  return sum;
}

Rational separating_odd_bruteforce(std::size_t N, std::size_t d, std::size_t k) {
  if (N > 20) reject("separating_odd_bruteforce: requires N <= 20");
  if (N < 2 || k < 1 || k > N - 1 || d > N)
    reject("separating_odd_bruteforce: bad arguments");
  // Designated sites sit in the middle of the range; the count only depends
  // on d, which the enumeration confirms rather than assumes.
  const std::size_t first = (N - d) / 2;
  const std::uint32_t red = d == 0 ? 0U : (((1U << d) - 1U) << first);
  std::uint64_t odd = 0;
  std::uint64_t total = 0;
  // Gosper's hack over all k-subsets of N sites.
  std::uint32_t set = (1U << k) - 1U;
  const std::uint32_t limit = 1U << N;
  while (set < limit) {
    ++total;
    odd += std::popcount(set & red) & 1U;
    const std::uint32_t c = set & (0U - set);
    const std::uint32_t r = set + c;
    set = (((r ^ set) >> 2) / c) | r;
  }
  return Rational::make(odd, total);
}

double separating_odd_lower_bound(std::size_t N, std::size_t d) {
  const double dn = static_cast<double>(N);
  const double dd = static_cast<double>(d);
  return dd * (dn - dd) / (dn * (dn - 1.0));
}

// ---------------------------------------------------------------------------
// Surplus

double surplus_prob(std::size_t d) {
  if (d < 1) reject("surplus_prob: requires d >= 1");
  // 2^(-2j) C(2j, j) = prod_{m=1..j} (2m-1)/(2m)
  double central = 1.0;
  for (std::size_t m = 1; m <= d; ++m)
    central *= static_cast<double>(2 * m - 1) / static_cast<double>(2 * m);
  return 0.5 * (1.0 - central);
}

// ---------------------------------------------------------------------------
// Neutral mutations

namespace {
void check_neutral_args(std::size_t n, std::size_t i, double p) {
  if (n < 2 || i < 1 || i > n - 1) reject("neutral mutation: requires 1 <= i <= n-1");
  if (!(p > 0.0 && p <= 0.5)) reject("neutral mutation: requires 0 < p <= 1/2");
}
}  // namespace

double neutral_mutation_prob_exact(std::size_t n, std::size_t i, double p) {
  check_neutral_args(n, i, p);
  const std::size_t top = std::min(i, n - i);
  const double ratio = p * p / ((1.0 - p) * (1.0 - p));
  // term(l) = C(i,l) C(n-i,l) p^(2l) (1-p)^(n-2l), built from term(1).
  double term = static_cast<double>(i) * static_cast<double>(n - i) * p * p *
                std::pow(1.0 - p, static_cast<double>(n) - 2.0);
  double sum = 0.0;
  for (std::size_t l = 1; l <= top; ++l) {
    sum += term;
    term *= static_cast<double>(i - l) * static_cast<double>(n - i - l) /
            (static_cast<double>(l + 1) * static_cast<double>(l + 1)) * ratio;
  }
  return sum;
}

double neutral_mutation_prob_bruteforce(std::size_t n, std::size_t i, double p) {
  check_neutral_args(n, i, p);
  if (n > 20) reject("neutral mutation bruteforce: requires n <= 20");
  const std::uint32_t parent = (1U << i) - 1U;
  double sum = 0.0;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    if (std::popcount(parent ^ mask) != static_cast<int>(i)) continue;
    const int flips = std::popcount(mask);
    sum += std::pow(p, flips) * std::pow(1.0 - p, static_cast<double>(n) - flips);
  }
  return sum;
}

NeutralBounds neutral_mutation_bounds(std::size_t n, std::size_t i, double p) {
  check_neutral_args(n, i, p);
  const double pairs = static_cast<double>(i) * static_cast<double>(n - i);
  const double lower = pairs * p * p * std::pow(1.0 - p, static_cast<double>(n) - 2.0);
  const double x = pairs * p * p / ((1.0 - p) * (1.0 - p));
  return {lower, lower * (1.0 + 2.0 * x), x <= 0.5};
}

// ---------------------------------------------------------------------------
// Jumps

BoundReport jump_prob_bound(std::size_t n, std::size_t i, double p) {
  if (!(p > 0.0 && p < 1.0)) reject("jump_prob_bound: requires 0 < p < 1");
  if (i < 1 || i > n) reject("jump_prob_bound: requires 1 <= i <= n");
  const double pn = p * static_cast<double>(n);
  const double value =
      p * static_cast<double>(n - i + 1) * std::exp(pn * pn / 4.0 + 1.0);
  return {value, "jump_prob_bound", false, std::nullopt};
}

double jump_prob_exact(std::size_t n, std::size_t i, double p) {
  if (!(p > 0.0 && p < 1.0)) reject("jump_prob_exact: requires 0 < p < 1");
  if (i < 1 || i > n) reject("jump_prob_exact: requires 1 <= i <= n");
  double best = 0.0;
  for (std::size_t d = 1; d <= i; ++d) {
    const std::size_t ones = i - d;
    const std::size_t zeros = n - ones;
    // d + l zeros flip up, l ones flip down.
    double sum = 0.0;
    for (std::size_t l = 0; l <= ones && d + l <= zeros; ++l) {
      const double flips = static_cast<double>(d + 2 * l);
      sum += choose(zeros, d + l) * choose(ones, l) * std::pow(p, flips) *
             std::pow(1.0 - p, static_cast<double>(n) - flips);
    }
    best = std::max(best, sum);
  }
  return best;
}

std::vector<double> jump_prob_bruteforce_table(std::size_t n, double p) {
  if (n > 14) reject("jump_prob_bruteforce_table: requires n <= 14");
  if (!(p > 0.0 && p < 1.0)) reject("jump_prob_bruteforce_table: requires 0 < p < 1");
  std::vector<double> mask_prob(n + 1);
  for (std::size_t f = 0; f <= n; ++f)
    mask_prob[f] = std::pow(p, static_cast<double>(f)) *
                   std::pow(1.0 - p, static_cast<double>(n - f));

  std::vector<double> best(n + 1, 0.0);
  std::vector<double> to_level(n + 1);
  const std::uint32_t space = 1U << n;
  for (std::uint32_t parent = 0; parent < space; ++parent) {
    std::fill(to_level.begin(), to_level.end(), 0.0);
    for (std::uint32_t mask = 0; mask < space; ++mask)
      to_level[std::popcount(parent ^ mask)] += mask_prob[std::popcount(mask)];
    const auto level = static_cast<std::size_t>(std::popcount(parent));
    for (std::size_t target = level + 1; target <= n; ++target)
      best[target] = std::max(best[target], to_level[target]);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Bit distance dominance

namespace {

void check_dominance_args(std::size_t n, std::size_t i) {
  if (n == 0 || n % 4 != 0) reject("distance dominance: n must be a positive multiple of 4");
  if (i < 1 || i > n - 1) reject("distance dominance: requires 1 <= i <= n-1");
}

DominanceReport report_from_counts(std::size_t n, std::size_t ones,
                                   const std::vector<std::uint64_t>& count_by_min,
                                   std::uint64_t total) {
  DominanceReport r;
  r.n = n;
  r.ones = ones;
  r.samples = total;
  const std::size_t quarter = n / 4;
  r.differences.resize(quarter);
  // tail[t] = #{min >= t}
  std::uint64_t tail = total;
  r.min_difference = 1.0;
  for (std::size_t t = 1; t <= quarter; ++t) {
    if (t >= 2) tail -= count_by_min[t - 1];
    const double empirical = static_cast<double>(tail) / static_cast<double>(total);
    const double uniform =
        static_cast<double>(quarter - t + 1) / static_cast<double>(quarter);
    r.differences[t - 1] = empirical - uniform;
    r.min_difference = std::min(r.min_difference, r.differences[t - 1]);
  }
  return r;
}

std::size_t circular_distance(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

}  // namespace

DominanceReport distance_dominance_check(std::size_t n, std::size_t i,
                                         std::size_t samples, Stream& rng) {
  check_dominance_args(n, i);
  if (samples < 10'000) reject("distance dominance: requires at least 10^4 samples");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t j = 0; j < i; ++j)
    std::swap(perm[j], perm[j + uniform_below(rng, n - j)]);
  const std::vector<std::size_t> ones(perm.begin(), perm.begin() + static_cast<long>(i));
  const std::vector<std::size_t> zeros(perm.begin() + static_cast<long>(i), perm.end());

  std::vector<std::uint64_t> count_by_min(n / 2 + 1, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t a = ones[uniform_below(rng, ones.size())];
    const std::size_t b = zeros[uniform_below(rng, zeros.size())];
    ++count_by_min[circular_distance(a, b, n)];
  }
  return report_from_counts(n, i, count_by_min, samples);
}

DominanceReport distance_dominance_exact(const Bitstring& x) {
  const std::size_t n = x.size();
  const std::size_t i = x.count_ones();
  check_dominance_args(n, i);
  std::vector<std::uint64_t> count_by_min(n / 2 + 1, 0);
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (!x.get(a)) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (x.get(b)) continue;
      ++count_by_min[circular_distance(a, b, n)];
      ++total;
    }
  }
  return report_from_counts(n, i, count_by_min, total);
}

bool distance_dominance_exhaustive(std::size_t n, std::size_t i) {
  check_dominance_args(n, i);
  if (n > 24) reject("distance dominance exhaustive: requires n <= 24");
  const std::size_t quarter = n / 4;
  const std::uint64_t pairs = static_cast<std::uint64_t>(i) * (n - i);
  for (std::uint32_t g = 0; g < (1U << n); ++g) {
    if (static_cast<std::size_t>(std::popcount(g)) != i) continue;
    std::vector<std::uint64_t> count_by_min(n / 2 + 1, 0);
    for (std::size_t a = 0; a < n; ++a) {
      if (!((g >> a) & 1U)) continue;
      for (std::size_t b = 0; b < n; ++b)
        if (!((g >> b) & 1U)) ++count_by_min[circular_distance(a, b, n)];
    }
    std::uint64_t tail = pairs;
    for (std::size_t t = 1; t <= quarter; ++t) {
      if (t >= 2) tail -= count_by_min[t - 1];
      // tail / pairs >= (quarter - t + 1) / quarter
      if (tail * quarter < (quarter - t + 1) * pairs) return false;
    }
  }
  return true;
}

}  // namespace bbga::theory
