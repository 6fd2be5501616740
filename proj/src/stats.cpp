#include "bbga/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "text_util.hpp"

namespace bbga::stats {

SampleSummary summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize: empty sample");
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();

  SampleSummary s;
  s.count = n;
  s.min = v.front();
  s.max = v.back();
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

SampleSummary summarize(std::span<const std::uint64_t> samples) {
  std::vector<double> v(samples.begin(), samples.end());
  return summarize(std::span<const double>(v));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string MWUResult::to_string() const {
  using detail::format_double;
  return "U=" + format_double(u_statistic) + " z=" + format_double(z_score) +
         " p_two_sided=" + format_double(p_value_two_sided) +
         " p_first_less=" + format_double(p_value_one_sided_first_less) +
         " p_first_greater=" + format_double(p_value_one_sided_first_greater) +
         " n1=" + std::to_string(n1) + " n2=" + std::to_string(n2) +
         " exact=" + (exact ? "true" : "false");
}

namespace {

struct Pooled {
  std::vector<double> twice_rank;  // 2 * midrank, indexed like the concatenation a ++ b
  double tie_sum = 0.0;            // sum over tie groups of t^3 - t
};

Pooled midranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> values(a.begin(), a.end());
  values.insert(values.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

  Pooled out;
  out.twice_rank.resize(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Ranks i+1 .. j+1 share their mean.
    const double twice = static_cast<double>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) out.twice_rank[order[k]] = twice;
    const double t = static_cast<double>(j - i + 1);
    out.tie_sum += t * t * t - t;
    i = j + 1;
  }
  return out;
}

}  // namespace

MWUResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                         MWUMode mode) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t total = n1 + n2;
  if (mode == MWUMode::Exact && total > kExactMaxTotal)
    throw std::invalid_argument("mann_whitney_u: exact mode needs |a| + |b| <= 16");

  const Pooled pooled = midranks(a, b);
  const double offset = static_cast<double>(n1) * static_cast<double>(n1 + 1);  // 2 * n1(n1+1)/2
  double twice_rank_sum = 0.0;
  for (std::size_t i = 0; i < n1; ++i) twice_rank_sum += pooled.twice_rank[i];
  const double twice_u = twice_rank_sum - offset;

  MWUResult r;
  r.n1 = n1;
  r.n2 = n2;
  r.u_statistic = 0.5 * twice_u;

  const double d1 = static_cast<double>(n1);
  const double d2 = static_cast<double>(n2);
  const double dn = static_cast<double>(total);
  const double mean = d1 * d2 / 2.0;
  double var = d1 * d2 / 12.0 * (dn + 1.0);
  if (total > 1) var -= d1 * d2 / 12.0 * pooled.tie_sum / (dn * (dn - 1.0));
  const double sigma = var > 0.0 ? std::sqrt(var) : 0.0;

  const double diff = r.u_statistic - mean;
  const double correction = diff > 0.0 ? 0.5 : (diff < 0.0 ? -0.5 : 0.0);
  r.z_score = sigma > 0.0 ? (diff - correction) / sigma : 0.0;

  if (mode == MWUMode::Approx) {
    if (sigma == 0.0) {
      r.p_value_two_sided = r.p_value_one_sided_first_less =
          r.p_value_one_sided_first_greater = 1.0;
      return r;
    }
    r.p_value_one_sided_first_less = normal_cdf((diff + 0.5) / sigma);
    r.p_value_one_sided_first_greater = normal_cdf(-(diff - 0.5) / sigma);
    r.p_value_two_sided =
        std::min(1.0, 2.0 * std::min(normal_cdf(r.z_score), normal_cdf(-r.z_score)));
    return r;
  }

  // Every choice of n1 pooled positions as "first sample", via Gosper's hack.
  // Twice-ranks are integers, so the comparisons below are exact.
  std::uint64_t le = 0, ge = 0, count = 0;
  std::uint32_t set = (1U << n1) - 1U;
  const std::uint32_t limit = 1U << total;
  while (set < limit) {
    double s = 0.0;
    for (std::uint32_t bits = set; bits != 0; bits &= bits - 1)
      s += pooled.twice_rank[static_cast<std::size_t>(std::countr_zero(bits))];
    const double u2 = s - offset;
    ++count;
    le += u2 <= twice_u;
    ge += u2 >= twice_u;
    const std::uint32_t c = set & (0U - set);
    const std::uint32_t rr = set + c;
    set = (((rr ^ set) >> 2) / c) | rr;
  }
  r.exact = true;
  r.p_value_one_sided_first_less = static_cast<double>(le) / static_cast<double>(count);
  r.p_value_one_sided_first_greater = static_cast<double>(ge) / static_cast<double>(count);
  r.p_value_two_sided = std::min(
      1.0, 2.0 * std::min(r.p_value_one_sided_first_less, r.p_value_one_sided_first_greater));
  return r;
}

}  // namespace bbga::stats
