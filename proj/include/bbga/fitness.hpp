#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bbga/bitstring.hpp"
#include "bbga/rng.hpp"

namespace bbga {

/// Objective value. Real-valued for every function except BinVal, which
/// carries an exact arbitrary-precision integer so that distinct genotypes
/// never collide, whatever n is.
class FitnessValue {
 public:
  using Exact = boost::multiprecision::cpp_int;

  FitnessValue() = default;
  FitnessValue(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit FitnessValue(Exact v) : value_(std::move(v)) {}

  bool is_exact() const noexcept { return value_.index() == 1; }
  double to_double() const;
  const Exact& exact() const { return std::get<Exact>(value_); }
  std::string to_string() const;

  friend std::partial_ordering operator<=>(const FitnessValue& a,
                                           const FitnessValue& b);
  friend bool operator==(const FitnessValue& a, const FitnessValue& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }

 private:
  std::variant<double, Exact> value_{0.0};
};

enum class FitnessKind { OneMax, RoyalRoad, MonotonePolynomial, Linear, BinVal };

/// Immutable description of one objective over {0,1}^n. Copies share the
/// underlying tables, so a spec can be handed to many concurrent runs.
class FitnessSpec {
 public:
  static FitnessSpec onemax(std::size_t n);
  /// Blocks are contiguous: [j*b, (j+1)*b) in 0-based positions.
  static FitnessSpec royal_road(std::size_t n, std::size_t block_size);
  /// Monomials are lists of distinct 0-based positions.
  static FitnessSpec polynomial(std::size_t n,
                                std::vector<std::vector<std::uint32_t>> monomials);
  static FitnessSpec linear(std::vector<double> weights);
  static FitnessSpec binval(std::size_t n);

  FitnessKind kind() const noexcept { return kind_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t block_size() const noexcept { return block_size_; }
  std::size_t monomial_count() const noexcept;
  /// Positions of monomial `m`, ascending.
  std::span<const std::uint32_t> monomial(std::size_t m) const;
  /// Indices of monomials that contain `position`.
  std::span<const std::uint32_t> monomials_containing(std::size_t position) const;
  std::span<const double> weights() const noexcept;

  std::string describe() const;

 private:
  struct PolyTables {
    std::vector<std::uint32_t> offsets;    // monomial -> [offsets[m], offsets[m+1])
    std::vector<std::uint32_t> positions;
    std::vector<std::uint32_t> inv_offsets;  // position -> monomial ids
    std::vector<std::uint32_t> inv_ids;
  };

  FitnessKind kind_ = FitnessKind::OneMax;
  std::size_t n_ = 0;
  std::size_t block_size_ = 0;
  std::shared_ptr<const PolyTables> poly_;
  std::shared_ptr<const std::vector<double>> weights_;
};

/// Pure evaluator; the reference for every other evaluation path.
/// Throws std::invalid_argument when x.size() != spec.n().
FitnessValue evaluate(const FitnessSpec& spec, const Bitstring& x);

/// Global maximum. Every in-scope function is monotone, so it is attained
/// at the all-ones string.
FitnessValue optimum(const FitnessSpec& spec);

/// m monomials, each `degree` positions drawn uniformly without replacement.
/// Monomials are drawn independently and may coincide.
FitnessSpec generate_random_polynomial(std::size_t n, std::size_t m,
                                       std::size_t degree, Stream& rng);

/// n weights i.i.d. uniform on [lo, hi]. Requires 0 < lo < hi.
FitnessSpec generate_random_linear(std::size_t n, double lo, double hi,
                                   Stream& rng);

/// Per-run evaluator holding scratch space for delta evaluation. Monotone
/// polynomials are re-evaluated only on monomials touched by the positions
/// where child and parent differ; all other kinds fall back to `evaluate`.
/// Not thread-safe; one instance per run.
class IncrementalEvaluator {
 public:
  explicit IncrementalEvaluator(const FitnessSpec& spec);

  FitnessValue full(const Bitstring& x) const { return evaluate(*spec_, x); }
  FitnessValue from_parent(const Bitstring& parent,
                           const FitnessValue& parent_fitness,
                           const Bitstring& child);

 private:
  const FitnessSpec* spec_;
  std::vector<Bitstring::Word> diff_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

/// Plain-text recipe for a function family:
///   onemax | royalroad:<b> | randompoly:<m>:<degree>:<seed>
///   | linear:<lo>:<hi>:<seed> | binval
/// Random families are materialised per instance key, so a sweep can draw a
/// fresh function for every run.
struct FunctionRecipe {
  FitnessKind kind = FitnessKind::OneMax;
  std::size_t block_size = 1;
  std::size_t monomials = 0;
  std::size_t degree = 0;
  double lo = 1.0;
  double hi = 2.0;
  std::uint64_t seed = 0;

  static FunctionRecipe parse(std::string_view text);
  std::string to_string() const;
  bool is_random() const noexcept {
    return kind == FitnessKind::MonotonePolynomial || kind == FitnessKind::Linear;
  }

  /// Builds the function for length n. Random families seed their generator
  /// with seed_mix(seed, instance_key); deterministic families ignore the key.
  FitnessSpec instantiate(std::size_t n, std::uint64_t instance_key = 0) const;

  friend bool operator==(const FunctionRecipe&, const FunctionRecipe&) = default;
};

}  // namespace bbga
