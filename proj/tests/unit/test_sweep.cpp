#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bbga/sweep.hpp"

using bbga::AlgorithmSpec;
using bbga::CGrid;
using bbga::SweepTable;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

bbga::SweepSpec small_spec() {
  bbga::SweepSpec s;
  s.function = bbga::FunctionRecipe::parse("onemax");
  s.n = 40;
  s.algorithm = AlgorithmSpec::parse("greedy2+1:uniform");
  s.grid = CGrid::parse("0.5:0.5:2");
  s.runs = 12;
  s.base_seed = 17;
  return s;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("algorithm strings") {
    const auto ea = AlgorithmSpec::parse("ea");
    CHECK(ea.family == AlgorithmSpec::Family::EA);
    const auto g = AlgorithmSpec::parse("greedy2+1");
    CHECK(g.crossover == bbga::CrossoverKind::uniform());
    CHECK(g.tiebreak == bbga::TieBreakKind::DupRnd);
    const auto g1 = AlgorithmSpec::parse("greedy2+1:1pt:dup-old");
    CHECK(g1.crossover == bbga::CrossoverKind::k_point(1));
    CHECK(g1.tiebreak == bbga::TieBreakKind::DupOld);
    CHECK(AlgorithmSpec::parse("greedy2+1:dup-old").tiebreak == bbga::TieBreakKind::DupOld);
    CHECK(AlgorithmSpec::parse("greedy2+1:2pt").crossover == bbga::CrossoverKind::k_point(2));

    const auto ga = AlgorithmSpec::parse("ga:mu=5,lambda=2,pc=0.25,xover=kpoint:3,sel=greedy,tie=dup-old");
    CHECK(ga.mu == 5);
    CHECK(ga.lambda == 2);
    CHECK(ga.p_c == 0.25);
    CHECK(ga.crossover == bbga::CrossoverKind::k_point(3));
    CHECK(ga.selection == bbga::ParentSelectionKind::GreedyOverBest);
    CHECK(ga.tiebreak == bbga::TieBreakKind::DupOld);
    const auto d = AlgorithmSpec::parse("ga:mu=5");
    CHECK(d.p_c == 1.0);
    CHECK(d.tiebreak == bbga::TieBreakKind::DupRnd);
    CHECK(d.selection == bbga::ParentSelectionKind::UniformOverPopulation);

    for (const char* text : {"ea", "greedy2+1:2pt:dup-old", "ga:mu=5,lambda=1,pc=1,xover=uniform,sel=uniform,tie=dup-rnd"})
      CHECK(AlgorithmSpec::parse(AlgorithmSpec::parse(text).to_string()) == AlgorithmSpec::parse(text));

    const auto c = ga.configure(100, 0.01, 500, 3);
    CHECK(c.mu == 5);
    CHECK(c.budget == 500);
    CHECK(c.seed == 3);
    CHECK(AlgorithmSpec::parse("greedy2+1").configure(10, 0.1, 9, 1).selection ==
          bbga::ParentSelectionKind::GreedyOverBest);
  }

  TEST_CASE("algorithm string errors carry positions") {
    CHECK(error_of([] { AlgorithmSpec::parse("greedy2+1:3pt"); }).find("position 10") != std::string::npos);
    CHECK(error_of([] { AlgorithmSpec::parse("ga:mu=5,lamda=1"); }).find("position 8") != std::string::npos);
    CHECK(error_of([] { AlgorithmSpec::parse("ga:mu=x"); }).find("position 6") != std::string::npos);
    CHECK(error_of([] { AlgorithmSpec::parse("ga:pc=2"); }).find("position 6") != std::string::npos);
    CHECK(error_of([] { AlgorithmSpec::parse("ga:mu=2,mu=3"); }).find("repeated") != std::string::npos);
    CHECK_FALSE(error_of([] { AlgorithmSpec::parse("ea:x"); }).empty());
    CHECK_FALSE(error_of([] { AlgorithmSpec::parse("sga"); }).empty());
    CHECK_FALSE(error_of([] { AlgorithmSpec::parse("greedy2+1:1pt:dup-old:x"); }).empty());
    CHECK_FALSE(error_of([] { AlgorithmSpec::parse("ga:mu=0"); }).empty());
  }

  TEST_CASE("rate grid") {
    const auto g = CGrid::parse("0.1:0.1:4.0");
    const auto v = g.values();
    REQUIRE(v.size() == 40);
    CHECK(v[2] == 0.3);
    CHECK(v.back() == 4.0);
    CHECK(std::is_sorted(v.begin(), v.end()));
    CHECK(CGrid::parse("1:1:1").values() == std::vector<double>{1.0});
    CHECK(error_of([] { CGrid::parse("0:1:2"); }).find("position 0") != std::string::npos);
    CHECK(error_of([] { CGrid::parse("1:0:2"); }).find("position 2") != std::string::npos);
    CHECK(error_of([] { CGrid::parse("2:1:1"); }).find("position 4") != std::string::npos);
    CHECK_FALSE(error_of([] { CGrid::parse("1:2"); }).empty());
  }

  TEST_CASE("sidedness") {
    CHECK(bbga::parse_sidedness("two") == bbga::Sidedness::TwoSided);
    CHECK(bbga::parse_sidedness("a-less") == bbga::Sidedness::ALess);
    CHECK(bbga::parse_sidedness("b-less") == bbga::Sidedness::BLess);
    CHECK_THROWS_AS(bbga::parse_sidedness("left"), std::invalid_argument);
  }

  TEST_CASE("CSV round trip") {
    SweepTable t;
    t.rows.push_back({0.1, 10, 10, 0, 1234.5, 17.25, 1000, 1200, 1500});
    t.rows.push_back({0.30000000000000004, 3, 1, 2, 1e9 / 3, 0, 1e9 / 3, 1e9 / 3, 1e9 / 3});
    const double nan = std::nan("");
    t.rows.push_back({4, 2, 0, 2, nan, nan, nan, nan, nan});
    const auto csv = t.to_csv();
    CHECK(csv.rfind("c,runs,successes,censored,mean,std,min,median,max\n", 0) == 0);
    CHECK(csv.find("4,2,0,2,nan,nan,nan,nan,nan\n") != std::string::npos);
    CHECK(SweepTable::from_csv(csv) == t);
    CHECK(SweepTable::from_csv(csv).to_csv() == csv);

    CHECK_THROWS_AS(SweepTable::from_csv("c,runs\n"), std::invalid_argument);
    const std::string header(SweepTable::kHeader);
    CHECK_THROWS_AS(SweepTable::from_csv(header + "\n1,2,1,0,1,1,1,1,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(SweepTable::from_csv(header + "\n1,1,1,0,1,1,1,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(SweepTable::from_csv(header + "\n2,1,1,0,1,0,1,1,1\n1,1,1,0,1,0,1,1,1\n"),
                    std::invalid_argument);
  }

  TEST_CASE("sweep table shape and singleton rows") {
    auto s = small_spec();
    const auto t = bbga::run_sweep(s);
    REQUIRE(t.rows.size() == 4);
    for (const auto& r : t.rows) {
      CHECK(r.runs == 12);
      CHECK(r.successes + r.censored == r.runs);
      CHECK(r.min <= r.median);
      CHECK(r.median <= r.max);
    }
    CHECK(std::is_sorted(t.rows.begin(), t.rows.end(), [](auto& a, auto& b) { return a.c < b.c; }));

    s.runs = 1;
    s.grid = CGrid::parse("1:1:1");
    const auto single = bbga::run_sweep(s);
    const auto outcome = bbga::run_point(s.function, s.n, s.algorithm, 1.0, 1, s.base_seed, 0, s.budget, 1);
    CHECK(single.rows[0].mean == double(outcome[0].evaluations));
    CHECK(single.rows[0].std == 0);
  }

  TEST_CASE("sweeps are reproducible and independent of the worker count") {
    auto s = small_spec();
    s.function = bbga::FunctionRecipe::parse("randompoly:40:3:5");
    const auto one = bbga::run_sweep(s).to_csv();
    CHECK(bbga::run_sweep(s).to_csv() == one);
    s.workers = 8;
    CHECK(bbga::run_sweep(s).to_csv() == one);
    s.workers = 3;
    CHECK(bbga::run_sweep(s).to_csv() == one);
    s.base_seed = 18;
    CHECK(bbga::run_sweep(s).to_csv() != one);
  }

  TEST_CASE("censored runs are reported separately") {
    auto s = small_spec();
    s.function = bbga::FunctionRecipe::parse("royalroad:10");
    s.n = 100;
    s.budget = 300;
    s.runs = 5;
    s.grid = CGrid::parse("1:1:1");
    const auto t = bbga::run_sweep(s);
    CHECK(t.rows[0].censored == 5);
    CHECK(t.rows[0].successes == 0);
    CHECK(std::isnan(t.rows[0].mean));
  }

  TEST_CASE("output file") {
    auto s = small_spec();
    s.out = "sweep_test_output.csv";
    const auto t = bbga::run_sweep(s);
    std::ifstream in(s.out);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == t.to_csv());
    CHECK(SweepTable::from_csv(buf.str()) == t);
    std::remove(s.out.c_str());

    s.out = "/nonexistent-dir/x.csv";
    CHECK_THROWS_AS(bbga::run_sweep(s), std::runtime_error);
  }

  TEST_CASE("bad configurations surface before running") {
    auto s = small_spec();
    s.grid = CGrid::parse("10:10:60");  // p = 60/40 >= 1
    CHECK_THROWS_AS(bbga::run_sweep(s), std::invalid_argument);
    s = small_spec();
    s.runs = 0;
    CHECK_THROWS_AS(bbga::run_sweep(s), std::invalid_argument);
  }

  TEST_CASE("parallel_for propagates exceptions") {
    CHECK_THROWS_AS(bbga::parallel_for(50, 4,
                                       [](std::size_t i) {
                                         if (i == 17) throw std::runtime_error("boom");
                                       }),
                    std::runtime_error);
    std::vector<int> hit(100, 0);
    bbga::parallel_for(100, 0, [&](std::size_t i) { hit[i] = 1; });
    CHECK(std::count(hit.begin(), hit.end(), 1) == 100);
  }

  TEST_CASE("comparison uses independent samples") {
    bbga::CompareSpec c;
    c.function = bbga::FunctionRecipe::parse("onemax");
    c.n = 60;
    c.a = AlgorithmSpec::parse("greedy2+1");
    c.b = AlgorithmSpec::parse("greedy2+1");
    c.runs = 30;
    c.base_seed = 3;
    const auto r = bbga::compare(c);
    CHECK(r.a.size() == 30);
    bool all_same = true;
    for (std::size_t i = 0; i < 30; ++i) all_same = all_same && r.a[i].evaluations == r.b[i].evaluations;
    CHECK_FALSE(all_same);
    CHECK(r.p_value == r.mwu.p_value_two_sided);
    c.sided = bbga::Sidedness::BLess;
    CHECK(bbga::compare(c).p_value == r.mwu.p_value_one_sided_first_greater);
  }

  TEST_CASE("null comparisons rarely look significant") {
    bbga::CompareSpec c;
    c.function = bbga::FunctionRecipe::parse("onemax");
    c.n = 100;
    c.a = c.b = AlgorithmSpec::parse("greedy2+1:uniform");
    c.runs = 200;
    int small = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
      c.base_seed = 1000 + rep;
      small += bbga::compare(c).p_value <= 1e-4;
    }
    CHECK(small <= 1);
  }
}
