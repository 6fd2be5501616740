#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <map>

#include "bbga/fitness.hpp"
#include "bbga/theory.hpp"
#include "bbga/variation.hpp"

using bbga::Bitstring;
using bbga::Individual;

namespace {

Individual ind(const char* bits, double fitness, std::uint64_t born = 0) {
  return {Bitstring::from_string(bits), fitness, born};
}

std::vector<std::vector<std::size_t>> all_cut_sets(std::size_t sites, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t c = from; c <= sites; ++c) {
      cur.push_back(c);
      self(self, c + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

bool mask_based(const Bitstring& a, const Bitstring& b, const Bitstring& y) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] != a[i] && y[i] != b[i]) return false;
  return true;
}

}  // namespace

TEST_SUITE("variation") {
  TEST_CASE("mutation extremes") {
    bbga::Stream rng(1);
    const auto x = Bitstring::random(130, rng);
    CHECK(bbga::standard_bit_mutation(x, 0.0, rng) == x);
    CHECK(bbga::standard_bit_mutation(x, 1.0, rng) == x.complement());
    CHECK_THROWS_AS(bbga::standard_bit_mutation(x, 1.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(bbga::standard_bit_mutation(x, -0.1, rng), std::invalid_argument);
  }

  TEST_CASE("mutation flips Binomial(n, p) genes") {
    bbga::Stream rng(2);
    const Bitstring x(1000);
    const int trials = 100'000;
    double flips = 0.0;
    for (int t = 0; t < trials; ++t) flips += bbga::standard_bit_mutation(x, 1e-3, rng).count_ones();
    CHECK(flips / trials == doctest::Approx(1.0).epsilon(0.03));
  }

  TEST_CASE("mutation flips each position with probability p") {
    bbga::Stream rng(3);
    const std::size_t n = 70;
    const double p = 0.1;
    std::vector<int> hits(n, 0);
    const int trials = 40'000;
    for (int t = 0; t < trials; ++t) {
      Bitstring y(n);
      bbga::mutate_in_place(y, p, rng);
      for (std::size_t i = 0; i < n; ++i) hits[i] += y[i];
    }
    const double se = std::sqrt(p * (1 - p) / trials);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(hits[i] / double(trials) - p) < 5 * se);
  }

  TEST_CASE("uniform crossover") {
    bbga::Stream rng(4);
    const auto x = Bitstring::random(100, rng);
    CHECK(bbga::uniform_crossover(x, x, rng) == x);

    std::map<std::string, int> counts;
    const auto a = Bitstring::from_string("10"), b = Bitstring::from_string("01");
    for (int t = 0; t < 40'000; ++t) ++counts[bbga::uniform_crossover(a, b, rng).to_string()];
    REQUIRE(counts.size() == 4);
    for (const auto& [s, c] : counts) CHECK(c == doctest::Approx(10'000).epsilon(0.05));
    CHECK_THROWS_AS(bbga::uniform_crossover(a, Bitstring(3), rng), std::invalid_argument);
  }

  TEST_CASE("uniform crossover surplus law") {
    bbga::Stream rng(5);
    const int trials = 20'000;
    for (std::size_t d = 1; d <= 50; d += (d < 5 ? 1 : 7)) {
      // Parents differ in 2d positions, each holding d of the ones there.
      const std::size_t n = 2 * d + 10;
      Bitstring a(n), b(n);
      for (std::size_t i = 0; i < d; ++i) a.set(i, true);
      for (std::size_t i = d; i < 2 * d; ++i) b.set(i, true);
      int surplus = 0;
      for (int t = 0; t < trials; ++t) surplus += bbga::uniform_crossover(a, b, rng).count_ones() > d;
      const double q = bbga::theory::surplus_prob(d);
      const double se = std::sqrt(q * (1 - q) / trials);
      CHECK(std::abs(surplus / double(trials) - q) <= 4 * se);
      CHECK(q >= 0.25);
    }
  }

  TEST_CASE("k-point crossover splices alternating segments") {
    const auto ones = Bitstring::ones(4), zeros = Bitstring(4);
    const std::size_t cut[] = {2};
    CHECK(bbga::splice(ones, zeros, cut).to_string() == "1100");
    const std::size_t cuts3[] = {1, 3, 5};
    CHECK(bbga::splice(Bitstring::ones(7), Bitstring(7), cuts3).to_string() == "1001100");
    const std::size_t bad[] = {0};
    CHECK_THROWS_AS(bbga::splice(ones, zeros, bad), std::invalid_argument);
    const std::size_t unsorted[] = {2, 1};
    CHECK_THROWS_AS(bbga::splice(ones, zeros, unsorted), std::invalid_argument);

    bbga::Stream rng(6);
    const auto x = Bitstring::random(50, rng);
    for (std::size_t k = 1; k < 50; k += 6) CHECK(bbga::k_point_crossover(x, x, k, rng) == x);
    CHECK_THROWS_AS(bbga::k_point_crossover(x, x, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(bbga::k_point_crossover(x, x, 50, rng), std::invalid_argument);
  }

  TEST_CASE("cut points are uniform k-subsets of 1..n-1") {
    bbga::Stream rng(7);
    for (std::size_t k : {1u, 2u, 3u}) {
      const std::size_t n = 6;
      std::map<std::vector<std::size_t>, int> counts;
      const int trials = 30'000;
      for (int t = 0; t < trials; ++t) {
        const auto cuts = bbga::sample_cut_points(n, k, rng);
        REQUIRE(std::is_sorted(cuts.begin(), cuts.end()));
        ++counts[cuts];
      }
      const auto subsets = all_cut_sets(n - 1, k);
      CHECK(counts.size() == subsets.size());
      for (const auto& s : subsets)
        CHECK(counts[s] == doctest::Approx(double(trials) / subsets.size()).epsilon(0.08));
    }
    // Large k goes through selection sampling.
    const auto cuts = bbga::sample_cut_points(200, 150, rng);
    CHECK(cuts.size() == 150);
    CHECK(std::adjacent_find(cuts.begin(), cuts.end(), std::greater_equal<>()) == cuts.end());
    CHECK(cuts.front() >= 1);
    CHECK(cuts.back() <= 199);
  }

  TEST_CASE("k = 1 gains a one with probability d/N") {
    // n = 6 genes, N = 5 cut sites, parents differ at genes 1 and 3 (d = 2).
    const auto x1 = Bitstring::from_string("010000");
    const auto x2 = Bitstring::from_string("000100");
    int gains = 0;
    const auto sets = all_cut_sets(5, 1);
    for (const auto& cuts : sets) gains += bbga::splice(x1, x2, cuts).count_ones() == 2;
    CHECK(gains * 5 == 2 * static_cast<int>(sets.size()));
  }

  TEST_CASE("k-point improvement frequency equals the separating-odd probability") {
    for (std::size_t N = 4; N <= 12; ++N) {
      const std::size_t n = N + 1;
      for (std::size_t d = 1; d <= N - 1; ++d) {
        Bitstring x1(n), x2(n);
        x1.set(0, true);
        x2.set(d, true);
        for (std::size_t k = 1; k <= N - 1; ++k) {
          std::uint64_t gains = 0, total = 0;
          for (const auto& cuts : all_cut_sets(N, k)) {
            gains += bbga::splice(x1, x2, cuts).count_ones() == 2;
            ++total;
          }
          const auto exact = bbga::theory::separating_odd_exact(N, d, k);
          CHECK(bbga::theory::Rational::make(gains, total) == exact);
          CHECK(gains * N * (N - 1) >= d * (N - d) * total);
          if (k == 1) CHECK(exact == bbga::theory::Rational::make(d, N));
        }
      }
    }
  }

  TEST_CASE("both crossovers are mask-based") {
    bbga::Stream rng(8);
    const std::size_t n = 6;
    for (std::uint32_t va = 0; va < (1U << n); ++va) {
      for (std::uint32_t vb = 0; vb < (1U << n); ++vb) {
        Bitstring a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
          a.set(i, (va >> i) & 1U);
          b.set(i, (vb >> i) & 1U);
        }
        bool ok = mask_based(a, b, bbga::uniform_crossover(a, b, rng));
        for (std::size_t k = 1; k < n; ++k)
          for (const auto& cuts : all_cut_sets(n - 1, k)) ok = ok && mask_based(a, b, bbga::splice(a, b, cuts));
        REQUIRE(ok);
      }
    }
    for (int t = 0; t < 500; ++t) {
      const auto a = Bitstring::random(10, rng), b = Bitstring::random(10, rng);
      CHECK(mask_based(a, b, bbga::uniform_crossover(a, b, rng)));
      CHECK(mask_based(a, b, bbga::k_point_crossover(a, b, 1 + t % 9, rng)));
    }
  }

  TEST_CASE("parent selection") {
    bbga::Stream rng(9);
    const std::vector<Individual> two = {ind("00", 3), ind("11", 5)};
    for (int t = 0; t < 100; ++t)
      CHECK(bbga::select_parent_index(two, bbga::ParentSelectionKind::GreedyOverBest, rng) == 1);

    const std::vector<Individual> same(4, ind("101", 2));
    std::array<int, 4> hits{};
    for (int t = 0; t < 40'000; ++t)
      ++hits[bbga::select_parent_index(same, bbga::ParentSelectionKind::UniformOverPopulation, rng)];
    for (int h : hits) CHECK(h == doctest::Approx(10'000).epsilon(0.05));

    const std::vector<Individual> tied = {ind("10", 1), ind("01", 1), ind("00", 0)};
    int first = 0;
    for (int t = 0; t < 10'000; ++t) {
      const auto i = bbga::select_parent_index(tied, bbga::ParentSelectionKind::GreedyOverBest, rng);
      REQUIRE(i < 2);
      first += i == 0;
    }
    CHECK(std::abs(first / 10'000.0 - 0.5) <= 0.02);

    CHECK_THROWS_AS(bbga::select_parent(std::span<const Individual>{},
                                        bbga::ParentSelectionKind::UniformOverPopulation, rng),
                    std::invalid_argument);
  }

  TEST_CASE("parent selection probability is non-decreasing in fitness") {
    bbga::Stream rng(10);
    const std::vector<Individual> pop = {ind("000", 0), ind("100", 1), ind("110", 2), ind("111", 3),
                                         ind("011", 2)};
    for (auto kind : {bbga::ParentSelectionKind::UniformOverPopulation,
                      bbga::ParentSelectionKind::GreedyOverBest}) {
      std::vector<int> hits(pop.size(), 0);
      for (int t = 0; t < 50'000; ++t) ++hits[bbga::select_parent_index(pop, kind, rng)];
      for (std::size_t i = 0; i < pop.size(); ++i)
        for (std::size_t j = 0; j < pop.size(); ++j)
          if (pop[i].fitness > pop[j].fitness) CHECK(hits[i] + 600 >= hits[j]);
    }
  }

  TEST_CASE("duplicates are removed first") {
    bbga::Stream rng(11);
    const std::vector<Individual> parents = {ind("1100", 5), ind("1100", 5)};
    const std::vector<Individual> offspring = {ind("1010", 5, 1)};
    for (auto tie : {bbga::TieBreakKind::DupRnd, bbga::TieBreakKind::DupOld}) {
      for (int t = 0; t < 50; ++t) {
        const auto s = bbga::environmental_selection(parents, offspring, 2, tie, rng);
        REQUIRE(s.size() == 2);
        CHECK(s[0].genotype != s[1].genotype);
      }
    }
  }

  TEST_CASE("dup-old keeps the older individuals") {
    bbga::Stream rng(12);
    const std::vector<Individual> parents = {ind("1100", 5, 3), ind("1010", 5, 7)};
    const std::vector<Individual> offspring = {ind("1001", 5, 8)};
    for (int t = 0; t < 50; ++t) {
      const auto s = bbga::environmental_selection(parents, offspring, 2, bbga::TieBreakKind::DupOld, rng);
      std::vector<std::string> g = {s[0].genotype.to_string(), s[1].genotype.to_string()};
      std::sort(g.begin(), g.end());
      CHECK(g == std::vector<std::string>{"1010", "1100"});
    }
    // dup-rnd lets the offspring in about two thirds of the time.
    int newcomer = 0;
    for (int t = 0; t < 30'000; ++t) {
      const auto s = bbga::environmental_selection(parents, offspring, 2, bbga::TieBreakKind::DupRnd, rng);
      newcomer += s[0].birth_generation == 8 || s[1].birth_generation == 8;
    }
    CHECK(newcomer / 30'000.0 == doctest::Approx(2.0 / 3.0).epsilon(0.03));
  }

  TEST_CASE("equal ages under dup-old are broken at random") {
    bbga::Stream rng(13);
    const std::vector<Individual> parents = {ind("1100", 9, 2)};
    const std::vector<Individual> offspring = {ind("1010", 9, 2)};
    int first = 0;
    for (int t = 0; t < 20'000; ++t)
      first += bbga::environmental_selection(parents, offspring, 1, bbga::TieBreakKind::DupOld, rng)[0]
                   .genotype.to_string() == "1100";
    CHECK(first / 20'000.0 == doctest::Approx(0.5).epsilon(0.05));
  }

  TEST_CASE("fitter offspring are always admitted") {
    bbga::Stream rng(14);
    const std::vector<Individual> parents = {ind("0000", 0), ind("1000", 1), ind("0100", 1)};
    const std::vector<Individual> offspring = {ind("1110", 3, 1), ind("1101", 3, 1)};
    for (auto tie : {bbga::TieBreakKind::DupRnd, bbga::TieBreakKind::DupOld}) {
      const auto s = bbga::environmental_selection(parents, offspring, 3, tie, rng);
      int kids = 0;
      for (const auto& x : s) kids += x.birth_generation == 1;
      CHECK(kids == 2);
    }
  }

  TEST_CASE("selection rejects bad shapes") {
    bbga::Stream rng(15);
    const std::vector<Individual> p = {ind("0", 0)};
    CHECK_THROWS_AS(bbga::environmental_selection(p, p, 0, bbga::TieBreakKind::DupRnd, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(bbga::environmental_selection(p, {}, 1, bbga::TieBreakKind::DupRnd, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(bbga::environmental_selection(p, p, 2, bbga::TieBreakKind::DupRnd, rng),
                    std::invalid_argument);
  }

  TEST_CASE("cut selection invariants on random pools") {
    bbga::Stream rng(16);
    const auto f = bbga::FitnessSpec::onemax(6);
    for (int t = 0; t < 3000; ++t) {
      const std::size_t mu = 1 + bbga::uniform_below(rng, 4);
      const std::size_t lambda = 1 + bbga::uniform_below(rng, 3);
      std::vector<Individual> parents, offspring;
      for (std::size_t i = 0; i < mu; ++i) {
        auto g = Bitstring::random(6, rng);
        parents.push_back({g, bbga::evaluate(f, g), bbga::uniform_below(rng, 3)});
      }
      for (std::size_t i = 0; i < lambda; ++i) {
        auto g = bbga::uniform_below(rng, 2) ? parents[0].genotype : Bitstring::random(6, rng);
        offspring.push_back({g, bbga::evaluate(f, g), 3});
      }
      const auto tie = t % 2 ? bbga::TieBreakKind::DupOld : bbga::TieBreakKind::DupRnd;
      const auto s = bbga::environmental_selection(parents, offspring, mu, tie, rng);
      REQUIRE(s.size() == mu);

      // (a) nothing excluded beats anything admitted; top-mu multiset never drops.
      std::vector<double> pool_fit, kept_fit, parent_fit;
      for (const auto& x : parents) pool_fit.push_back(x.fitness.to_double());
      parent_fit = pool_fit;
      for (const auto& x : offspring) pool_fit.push_back(x.fitness.to_double());
      for (const auto& x : s) kept_fit.push_back(x.fitness.to_double());
      std::sort(pool_fit.rbegin(), pool_fit.rend());
      std::sort(kept_fit.rbegin(), kept_fit.rend());
      std::sort(parent_fit.rbegin(), parent_fit.rend());
      for (std::size_t i = 0; i < mu; ++i) {
        CHECK(kept_fit[i] == pool_fit[i]);
        CHECK(kept_fit[i] >= parent_fit[i]);
      }
    }
  }

  TEST_CASE("dup-old with mu = 2 preserves a distance-2 pair") {
    bbga::Stream rng(17);
    const auto f = bbga::FitnessSpec::onemax(8);
    for (int t = 0; t < 2000; ++t) {
      const auto a = Bitstring::from_string("11001010");
      const auto b = Bitstring::from_string("10101010");
      std::vector<Individual> pop = {{a, bbga::evaluate(f, a), 0}, {b, bbga::evaluate(f, b), 1}};
      for (std::uint64_t gen = 2; gen < 12; ++gen) {
        auto child = bbga::standard_bit_mutation(
            bbga::uniform_crossover(pop[0].genotype, pop[1].genotype, rng), 0.2, rng);
        const auto cf = bbga::evaluate(f, child);
        const bool better = cf > pop[0].fitness;
        const std::vector<Individual> kid = {{child, cf, gen}};
        pop = bbga::environmental_selection(pop, kid, 2, bbga::TieBreakKind::DupOld, rng);
        if (better) break;
        const bool has_a = pop[0].genotype == a || pop[1].genotype == a;
        const bool has_b = pop[0].genotype == b || pop[1].genotype == b;
        REQUIRE(has_a);
        REQUIRE(has_b);
      }
    }
  }
}
