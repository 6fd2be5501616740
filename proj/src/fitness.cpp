#include "bbga/fitness.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "bbga/kernels.hpp"
#include "text_util.hpp"

namespace bbga {

// ---------------------------------------------------------------------------
// FitnessValue

double FitnessValue::to_double() const {
  if (const double* d = std::get_if<double>(&value_)) return *d;
  return exact().convert_to<double>();
}

std::string FitnessValue::to_string() const {
  if (const double* d = std::get_if<double>(&value_)) return detail::format_double(*d);
  return exact().str();
}

std::partial_ordering operator<=>(const FitnessValue& a, const FitnessValue& b) {
  const double* da = std::get_if<double>(&a.value_);
  const double* db = std::get_if<double>(&b.value_);
  if (da && db) return *da <=> *db;
  if (!da && !db) {
    const int c = a.exact().compare(b.exact());
    return c < 0 ? std::partial_ordering::less
                 : c > 0 ? std::partial_ordering::greater
                         : std::partial_ordering::equivalent;
  }
  return a.to_double() <=> b.to_double();
}

// ---------------------------------------------------------------------------
// FitnessSpec

FitnessSpec FitnessSpec::onemax(std::size_t n) {
  FitnessSpec s;
  s.kind_ = FitnessKind::OneMax;
  s.n_ = n;
  return s;
}

FitnessSpec FitnessSpec::royal_road(std::size_t n, std::size_t block_size) {
  if (block_size == 0 || n % block_size != 0)
    throw std::invalid_argument("royal road: block size must be positive and divide n");
  FitnessSpec s;
  s.kind_ = FitnessKind::RoyalRoad;
  s.n_ = n;
  s.block_size_ = block_size;
  return s;
}

FitnessSpec FitnessSpec::polynomial(std::size_t n,
                                    std::vector<std::vector<std::uint32_t>> monomials) {
  auto tables = std::make_shared<PolyTables>();
  tables->offsets.reserve(monomials.size() + 1);
  tables->offsets.push_back(0);
  std::vector<std::uint32_t> per_position(n, 0);
  for (auto& mono : monomials) {
    if (mono.empty())
      throw std::invalid_argument("polynomial: monomial without positions");
    std::sort(mono.begin(), mono.end());
    if (std::adjacent_find(mono.begin(), mono.end()) != mono.end())
      throw std::invalid_argument("polynomial: repeated position in monomial");
    if (mono.back() >= n)
      throw std::invalid_argument("polynomial: position out of range");
    for (auto pos : mono) {
      tables->positions.push_back(pos);
      ++per_position[pos];
    }
    tables->offsets.push_back(static_cast<std::uint32_t>(tables->positions.size()));
  }
  tables->inv_offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    tables->inv_offsets[i + 1] = tables->inv_offsets[i] + per_position[i];
  tables->inv_ids.resize(tables->positions.size());
  std::vector<std::uint32_t> cursor(tables->inv_offsets.begin(),
                                    tables->inv_offsets.end() - 1);
  for (std::uint32_t m = 0; m + 1 < tables->offsets.size(); ++m)
    for (auto k = tables->offsets[m]; k < tables->offsets[m + 1]; ++k)
      tables->inv_ids[cursor[tables->positions[k]]++] = m;

  FitnessSpec s;
  s.kind_ = FitnessKind::MonotonePolynomial;
  s.n_ = n;
  s.poly_ = std::move(tables);
  return s;
}

FitnessSpec FitnessSpec::linear(std::vector<double> weights) {
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("linear: weights must be strictly positive");
  FitnessSpec s;
  s.kind_ = FitnessKind::Linear;
  s.n_ = weights.size();
  s.weights_ = std::make_shared<const std::vector<double>>(std::move(weights));
  return s;
}

FitnessSpec FitnessSpec::binval(std::size_t n) {
  FitnessSpec s;
  s.kind_ = FitnessKind::BinVal;
  s.n_ = n;
  return s;
}

std::size_t FitnessSpec::monomial_count() const noexcept {
  return poly_ ? poly_->offsets.size() - 1 : 0;
}

std::span<const std::uint32_t> FitnessSpec::monomial(std::size_t m) const {
  const auto& t = *poly_;
  return {t.positions.data() + t.offsets[m], t.offsets[m + 1] - t.offsets[m]};
}

std::span<const std::uint32_t> FitnessSpec::monomials_containing(
    std::size_t position) const {
  const auto& t = *poly_;
  return {t.inv_ids.data() + t.inv_offsets[position],
          t.inv_offsets[position + 1] - t.inv_offsets[position]};
}

std::span<const double> FitnessSpec::weights() const noexcept {
  if (!weights_) return {};
  return *weights_;
}

std::string FitnessSpec::describe() const {
  switch (kind_) {
    case FitnessKind::OneMax:
      return "onemax(n=" + std::to_string(n_) + ")";
    case FitnessKind::RoyalRoad:
      return "royalroad(n=" + std::to_string(n_) + ",b=" + std::to_string(block_size_) + ")";
    case FitnessKind::MonotonePolynomial:
      return "polynomial(n=" + std::to_string(n_) + ",m=" +
             std::to_string(monomial_count()) + ")";
    case FitnessKind::Linear:
      return "linear(n=" + std::to_string(n_) + ")";
    case FitnessKind::BinVal:
      return "binval(n=" + std::to_string(n_) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool range_all_ones(const Bitstring& x, std::size_t start, std::size_t len) {
  auto words = x.words();
  while (len > 0) {
    const std::size_t w = start / Bitstring::kWordBits;
    const std::size_t off = start % Bitstring::kWordBits;
    const std::size_t take = std::min(len, Bitstring::kWordBits - off);
    const Bitstring::Word mask =
        (take == 64 ? ~Bitstring::Word{0} : ((Bitstring::Word{1} << take) - 1)) << off;
    if ((words[w] & mask) != mask) return false;
    start += take;
    len -= take;
  }
  return true;
}

bool monomial_satisfied(const FitnessSpec& spec, std::size_t m, const Bitstring& x) {
  for (auto pos : spec.monomial(m))
    if (!x.get(pos)) return false;
  return true;
}

FitnessValue binval_of(const Bitstring& x) {
  // Position 0 carries weight 2^(n-1): the value is the string read MSB first.
  FitnessValue::Exact v = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    if (x.get(i)) boost::multiprecision::bit_set(v, static_cast<unsigned>(n - 1 - i));
  return FitnessValue(std::move(v));
}

}  // namespace

FitnessValue evaluate(const FitnessSpec& spec, const Bitstring& x) {
  if (x.size() != spec.n())
    throw std::invalid_argument("evaluate: genotype length " + std::to_string(x.size()) +
                                " does not match n=" + std::to_string(spec.n()));
  switch (spec.kind()) {
    case FitnessKind::OneMax:
      return static_cast<double>(x.count_ones());
    case FitnessKind::RoyalRoad: {
      std::size_t complete = 0;
      for (std::size_t start = 0; start < spec.n(); start += spec.block_size())
        complete += range_all_ones(x, start, spec.block_size());
      return static_cast<double>(complete);
    }
    case FitnessKind::MonotonePolynomial: {
      std::size_t satisfied = 0;
      for (std::size_t m = 0; m < spec.monomial_count(); ++m)
        satisfied += monomial_satisfied(spec, m, x);
      return static_cast<double>(satisfied);
    }
    case FitnessKind::Linear:
      return kernels::active().masked_sum(x.words().data(), spec.weights().data(),
                                          spec.n());
    case FitnessKind::BinVal:
      return binval_of(x);
  }
  throw std::logic_error("evaluate: unknown fitness kind");
}

FitnessValue optimum(const FitnessSpec& spec) {
  return evaluate(spec, Bitstring::ones(spec.n()));
}

FitnessSpec generate_random_polynomial(std::size_t n, std::size_t m,
                                       std::size_t degree, Stream& rng) {
  if (degree == 0 || degree > n)
    throw std::invalid_argument("random polynomial: degree must be in [1, n]");
  std::vector<std::vector<std::uint32_t>> monomials(m);
  for (auto& mono : monomials) {
    // Floyd's sampling of `degree` distinct positions out of n.
    mono.reserve(degree);
    for (std::size_t j = n - degree; j < n; ++j) {
      const auto t = static_cast<std::uint32_t>(uniform_below(rng, j + 1));
      if (std::find(mono.begin(), mono.end(), t) == mono.end())
        mono.push_back(t);
      else
        mono.push_back(static_cast<std::uint32_t>(j));
    }
  }
  return FitnessSpec::polynomial(n, std::move(monomials));
}

FitnessSpec generate_random_linear(std::size_t n, double lo, double hi, Stream& rng) {
  if (!(lo > 0.0) || !(lo < hi))
    throw std::invalid_argument("random linear: requires 0 < lo < hi");
  std::vector<double> w(n);
  for (auto& wi : w) wi = lo + (hi - lo) * uniform01(rng);
  return FitnessSpec::linear(std::move(w));
}

// ---------------------------------------------------------------------------
// IncrementalEvaluator

IncrementalEvaluator::IncrementalEvaluator(const FitnessSpec& spec)
    : spec_(&spec),
      diff_((spec.n() + Bitstring::kWordBits - 1) / Bitstring::kWordBits),
      stamp_(spec.monomial_count(), 0) {}

FitnessValue IncrementalEvaluator::from_parent(const Bitstring& parent,
                                               const FitnessValue& parent_fitness,
                                               const Bitstring& child) {
  const FitnessSpec& spec = *spec_;
  if (spec.kind() != FitnessKind::MonotonePolynomial) return evaluate(spec, child);
  if (child.size() != spec.n() || parent.size() != spec.n())
    throw std::invalid_argument("evaluate: genotype length mismatch");

  kernels::active().xor_words(parent.words().data(), child.words().data(),
                              diff_.data(), diff_.size());
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  long long delta = 0;
  for (std::size_t w = 0; w < diff_.size(); ++w) {
    for (auto bits = diff_[w]; bits != 0; bits &= bits - 1) {
      const std::size_t pos = w * Bitstring::kWordBits + std::countr_zero(bits);
      for (auto m : spec.monomials_containing(pos)) {
        if (stamp_[m] == epoch_) continue;
        stamp_[m] = epoch_;
        delta += static_cast<int>(monomial_satisfied(spec, m, child)) -
                 static_cast<int>(monomial_satisfied(spec, m, parent));
      }
    }
  }
  return parent_fitness.to_double() + static_cast<double>(delta);
}

// ---------------------------------------------------------------------------
// FunctionRecipe

FunctionRecipe FunctionRecipe::parse(std::string_view text) {
  const auto toks = detail::split(text, ':');
  const std::string_view head = toks[0].text;
  auto expect_fields = [&](std::size_t count) {
    if (toks.size() != count)
      detail::parse_error("expected " + std::to_string(count - 1) + " parameter(s) for '" +
                              std::string(head) + "'",
                          text, toks.size() > count ? toks[count].offset : text.size());
  };
  FunctionRecipe r;
  if (head == "onemax") {
    expect_fields(1);
    r.kind = FitnessKind::OneMax;
  } else if (head == "binval") {
    expect_fields(1);
    r.kind = FitnessKind::BinVal;
  } else if (head == "royalroad") {
    expect_fields(2);
    r.kind = FitnessKind::RoyalRoad;
    r.block_size = detail::parse_number<std::size_t>(toks[1], text, "block size");
    if (r.block_size == 0) detail::parse_error("block size must be positive", text, toks[1].offset);
  } else if (head == "randompoly") {
    expect_fields(4);
    r.kind = FitnessKind::MonotonePolynomial;
    r.monomials = detail::parse_number<std::size_t>(toks[1], text, "monomial count");
    r.degree = detail::parse_number<std::size_t>(toks[2], text, "degree");
    r.seed = detail::parse_number<std::uint64_t>(toks[3], text, "seed");
    if (r.degree == 0) detail::parse_error("degree must be positive", text, toks[2].offset);
  } else if (head == "linear") {
    expect_fields(4);
    r.kind = FitnessKind::Linear;
    r.lo = detail::parse_number<double>(toks[1], text, "lower weight bound");
    r.hi = detail::parse_number<double>(toks[2], text, "upper weight bound");
    r.seed = detail::parse_number<std::uint64_t>(toks[3], text, "seed");
    if (!(r.lo > 0.0) || !(r.lo < r.hi))
      detail::parse_error("weight bounds must satisfy 0 < lo < hi", text, toks[1].offset);
  } else {
    detail::parse_error("unknown function '" + std::string(head) + "'", text, 0);
  }
  return r;
}

std::string FunctionRecipe::to_string() const {
  switch (kind) {
    case FitnessKind::OneMax:
      return "onemax";
    case FitnessKind::BinVal:
      return "binval";
    case FitnessKind::RoyalRoad:
      return "royalroad:" + std::to_string(block_size);
    case FitnessKind::MonotonePolynomial:
      return "randompoly:" + std::to_string(monomials) + ":" + std::to_string(degree) +
             ":" + std::to_string(seed);
    case FitnessKind::Linear:
      return "linear:" + detail::format_double(lo) + ":" + detail::format_double(hi) +
             ":" + std::to_string(seed);
  }
  return "?";
}

FitnessSpec FunctionRecipe::instantiate(std::size_t n, std::uint64_t instance_key) const {
  Stream rng(seed_mix(seed, instance_key));
  switch (kind) {
    case FitnessKind::OneMax:
      return FitnessSpec::onemax(n);
    case FitnessKind::BinVal:
      return FitnessSpec::binval(n);
    case FitnessKind::RoyalRoad:
      return FitnessSpec::royal_road(n, block_size);
    case FitnessKind::MonotonePolynomial:
      return generate_random_polynomial(n, monomials, degree, rng);
    case FitnessKind::Linear:
      return generate_random_linear(n, lo, hi, rng);
  }
  throw std::logic_error("recipe: unknown kind");
}

}  // namespace bbga
