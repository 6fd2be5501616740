#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace bbga::stats {

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation (n-1 denominator), 0 for one value
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

/// Throws std::invalid_argument on empty input. All statistics are computed
/// over the sorted sample, so any permutation gives a bit-identical result.
SampleSummary summarize(std::span<const double> samples);
SampleSummary summarize(std::span<const std::uint64_t> samples);

enum class MWUMode { Exact, Approx };

struct MWUResult {
  double u_statistic = 0.0;  ///< U for the first sample, midranks for ties
  double z_score = 0.0;      ///< tie-corrected, continuity-corrected normal score
  double p_value_two_sided = 1.0;
  double p_value_one_sided_first_less = 1.0;
  double p_value_one_sided_first_greater = 1.0;
  bool exact = false;
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  std::string to_string() const;
};

inline constexpr std::size_t kExactMaxTotal = 16;

/// Mann-Whitney U test of a against b. Exact mode enumerates every split of
/// the pooled values into groups of sizes |a| and |b| and needs
/// |a| + |b| <= 16; approx mode uses the normal approximation with tie and
/// continuity correction.
MWUResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                         MWUMode mode = MWUMode::Approx);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace bbga::stats
