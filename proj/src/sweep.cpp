#include "bbga/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "text_util.hpp"

namespace bbga {

using detail::format_double;
using detail::parse_error;
using detail::parse_number;
using detail::split;
using detail::Token;

// ---------------------------------------------------------------------------
// Algorithm strings

namespace {

bool parse_tiebreak(std::string_view s, TieBreakKind& out) {
  if (s == "dup-rnd") out = TieBreakKind::DupRnd;
  else if (s == "dup-old") out = TieBreakKind::DupOld;
  else return false;
  return true;
}

bool parse_greedy_crossover(std::string_view s, CrossoverKind& out) {
  if (s == "uniform") out = CrossoverKind::uniform();
  else if (s == "1pt") out = CrossoverKind::k_point(1);
  else if (s == "2pt") out = CrossoverKind::k_point(2);
  else return false;
  return true;
}

void parse_ga_options(std::string_view text, std::size_t base, AlgorithmSpec& spec) {
  std::vector<std::string> seen;
  for (const Token& item : split(text.substr(base), ',', base)) {
    const auto eq = item.text.find('=');
    if (eq == std::string_view::npos) parse_error("expected key=value", text, item.offset);
    const std::string key(item.text.substr(0, eq));
    const Token value{item.text.substr(eq + 1), item.offset + eq + 1};
    for (const auto& k : seen)
      if (k == key) parse_error("repeated key '" + key + "'", text, item.offset);
    seen.push_back(key);

    if (key == "mu") {
      spec.mu = parse_number<std::size_t>(value, text, "an integer");
    } else if (key == "lambda") {
      spec.lambda = parse_number<std::size_t>(value, text, "an integer");
    } else if (key == "pc") {
      spec.p_c = parse_number<double>(value, text, "a probability");
      if (!(spec.p_c >= 0.0 && spec.p_c <= 1.0))
        parse_error("crossover probability outside [0, 1]", text, value.offset);
    } else if (key == "xover") {
      if (value.text == "uniform") {
        spec.crossover = CrossoverKind::uniform();
      } else if (value.text.starts_with("kpoint:")) {
        const Token k{value.text.substr(7), value.offset + 7};
        spec.crossover = CrossoverKind::k_point(parse_number<std::size_t>(k, text, "an integer"));
        if (spec.crossover.k == 0) parse_error("k must be positive", text, k.offset);
      } else {
        parse_error("unknown crossover (uniform or kpoint:<k>)", text, value.offset);
      }
    } else if (key == "sel") {
      if (value.text == "uniform") spec.selection = ParentSelectionKind::UniformOverPopulation;
      else if (value.text == "greedy") spec.selection = ParentSelectionKind::GreedyOverBest;
      else parse_error("unknown parent selection (uniform or greedy)", text, value.offset);
    } else if (key == "tie") {
      if (!parse_tiebreak(value.text, spec.tiebreak))
        parse_error("unknown tie-break (dup-rnd or dup-old)", text, value.offset);
    } else {
      parse_error("unknown key '" + key + "'", text, item.offset);
    }
  }
  if (spec.mu == 0) parse_error("mu must be at least 1", text, base);
  if (spec.lambda == 0) parse_error("lambda must be at least 1", text, base);
}

}  // namespace

AlgorithmSpec AlgorithmSpec::parse(std::string_view text) {
  AlgorithmSpec spec;
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);

  if (head == "ea") {
    if (colon != std::string_view::npos) parse_error("ea takes no options", text, colon);
    return spec;
  }
  if (head == "greedy2+1") {
    spec.family = Family::Greedy2Plus1;
    spec.mu = 2;
    spec.lambda = 1;
    spec.p_c = 1.0;
    spec.selection = ParentSelectionKind::GreedyOverBest;
    spec.tiebreak = TieBreakKind::DupRnd;
    if (colon == std::string_view::npos) return spec;
    const auto parts = split(text.substr(colon + 1), ':', colon + 1);
    if (parts.size() > 2) parse_error("too many options", text, parts[2].offset);
    std::size_t next = 0;
    if (parse_greedy_crossover(parts[0].text, spec.crossover)) ++next;
    if (next < parts.size()) {
      if (!parse_tiebreak(parts[next].text, spec.tiebreak))
        parse_error(next == 0 ? "expected uniform, 1pt, 2pt, dup-rnd or dup-old"
                              : "expected dup-rnd or dup-old",
                    text, parts[next].offset);
      if (next + 1 < parts.size()) parse_error("too many options", text, parts[next + 1].offset);
    }
    return spec;
  }
  if (head == "ga") {
    spec.family = Family::GA;
    spec.mu = 2;
    spec.lambda = 1;
    spec.p_c = 1.0;
    spec.tiebreak = TieBreakKind::DupRnd;
    if (colon != std::string_view::npos) parse_ga_options(text, colon + 1, spec);
    return spec;
  }
  parse_error("unknown algorithm (ea, greedy2+1 or ga)", text, 0);
}

std::string AlgorithmSpec::to_string() const {
  switch (family) {
    case Family::EA:
      return "ea";
    case Family::Greedy2Plus1: {
      std::string x = crossover.type == CrossoverKind::Type::Uniform ? "uniform"
                                                                     : std::to_string(crossover.k) + "pt";
      return "greedy2+1:" + x + ":" + bbga::to_string(tiebreak);
    }
    case Family::GA:
      break;
  }
  return "ga:mu=" + std::to_string(mu) + ",lambda=" + std::to_string(lambda) +
         ",pc=" + format_double(p_c) + ",xover=" + crossover.to_string() +
         ",sel=" + bbga::to_string(selection) + ",tie=" + bbga::to_string(tiebreak);
}

GAConfig AlgorithmSpec::configure(std::size_t n, double p, std::uint64_t budget,
                                  std::uint64_t seed) const {
  GAConfig c;
  switch (family) {
    case Family::EA:
      c = make_one_plus_one_ea(n, p);
      break;
    case Family::Greedy2Plus1:
      c = make_greedy_2plus1(n, p, crossover, tiebreak);
      break;
    case Family::GA:
      c.n = n;
      c.mu = mu;
      c.lambda = lambda;
      c.p = p;
      c.p_c = p_c;
      c.crossover = crossover;
      c.selection = selection;
      c.tiebreak = tiebreak;
      break;
  }
  c.budget = budget;
  c.seed = seed;
  return c;
}

// ---------------------------------------------------------------------------
// Grid

CGrid CGrid::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) parse_error("expected start:step:end", text, 0);
  CGrid g;
  g.start = parse_number<double>(parts[0], text, "a number");
  g.step = parse_number<double>(parts[1], text, "a number");
  g.end = parse_number<double>(parts[2], text, "a number");
  if (!(g.start > 0.0)) parse_error("start must be positive", text, parts[0].offset);
  if (!(g.step > 0.0)) parse_error("step must be positive", text, parts[1].offset);
  if (!(g.end >= g.start)) parse_error("end must not be below start", text, parts[2].offset);
  return g;
}

std::vector<double> CGrid::values() const {
  const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j)
    out[j] = std::round((start + static_cast<double>(j) * step) * 1e10) / 1e10;
  return out;
}

// ---------------------------------------------------------------------------
// CSV

bool operator==(const SweepRow& a, const SweepRow& b) {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return same(a.c, b.c) && a.runs == b.runs && a.successes == b.successes &&
         a.censored == b.censored && same(a.mean, b.mean) && same(a.std, b.std) &&
         same(a.min, b.min) && same(a.median, b.median) && same(a.max, b.max);
}

namespace {
std::string csv_double(double v) { return std::isnan(v) ? "nan" : format_double(v); }
}  // namespace

std::string SweepTable::to_csv() const {
  std::string out(kHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += csv_double(r.c) + ',' + std::to_string(r.runs) + ',' + std::to_string(r.successes) +
           ',' + std::to_string(r.censored) + ',' + csv_double(r.mean) + ',' + csv_double(r.std) +
           ',' + csv_double(r.min) + ',' + csv_double(r.median) + ',' + csv_double(r.max) + '\n';
  }
  return out;
}

SweepTable SweepTable::from_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().text.empty()) lines.pop_back();
  if (lines.empty() || lines[0].text != kHeader)
    parse_error("expected header '" + std::string(kHeader) + "'", text, 0);

  SweepTable t;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto cells = split(lines[l].text, ',', lines[l].offset);
    if (cells.size() != 9) parse_error("expected 9 columns", text, lines[l].offset);
    auto real = [&](const Token& tok) {
      if (tok.text == "nan") return std::numeric_limits<double>::quiet_NaN();
      return parse_number<double>(tok, text, "a number");
    };
    auto count = [&](const Token& tok) { return parse_number<std::size_t>(tok, text, "a count"); };
    SweepRow r;
    r.c = real(cells[0]);
    r.runs = count(cells[1]);
    r.successes = count(cells[2]);
    r.censored = count(cells[3]);
    r.mean = real(cells[4]);
    r.std = real(cells[5]);
    r.min = real(cells[6]);
    r.median = real(cells[7]);
    r.max = real(cells[8]);
    if (r.successes + r.censored != r.runs)
      parse_error("successes + censored must equal runs", text, lines[l].offset);
    if (!t.rows.empty() && !(r.c > t.rows.back().c))
      parse_error("rows must be ascending in c", text, lines[l].offset);
    t.rows.push_back(r);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Running

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::vector<double> successful_evaluations(const std::vector<RunOutcome>& outcomes) {
  std::vector<double> out;
  for (const auto& o : outcomes)
    if (o.success) out.push_back(static_cast<double>(o.evaluations));
  return out;
}

namespace {

struct Job {
  double c;
  std::uint64_t seed;
  std::uint64_t instance_key;
};

// Runs the jobs and writes outcome i for job i.
void run_jobs(const FunctionRecipe& function, std::size_t n, const AlgorithmSpec& algorithm,
              std::uint64_t budget, std::size_t workers, const std::vector<Job>& jobs,
              std::vector<RunOutcome>& outcomes) {
  outcomes.assign(jobs.size(), {});
  const bool shared = !function.is_random();
  const FitnessSpec shared_spec = shared ? function.instantiate(n) : FitnessSpec::onemax(1);
  const FitnessValue shared_opt = shared ? optimum(shared_spec) : FitnessValue{};
  // Reject bad configurations once per rate, before any thread starts.
  double last_c = -1;
  for (const Job& job : jobs) {
    if (job.c == last_c) continue;
    last_c = job.c;
    algorithm.configure(n, job.c / static_cast<double>(n), budget, 0).validate();
  }

  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    const GAConfig config =
        algorithm.configure(n, job.c / static_cast<double>(n), budget, job.seed);
    RunResult r;
    if (shared) {
      r = run_ga(config, shared_spec, shared_opt);
    } else {
      const FitnessSpec spec = function.instantiate(n, job.instance_key);
      r = run_ga(config, spec, optimum(spec));
    }
    outcomes[i] = {r.evaluations, r.success};
  });
}

SweepRow summarize_row(double c, std::span<const RunOutcome> outcomes) {
  SweepRow row;
  row.c = c;
  row.runs = outcomes.size();
  std::vector<double> ok;
  for (const auto& o : outcomes)
    if (o.success) ok.push_back(static_cast<double>(o.evaluations));
  row.successes = ok.size();
  row.censored = row.runs - row.successes;
  if (ok.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean = row.std = row.min = row.median = row.max = nan;
  } else {
    const auto s = stats::summarize(std::span<const double>(ok));
    row.mean = s.mean;
    row.std = s.std;
    row.min = s.min;
    row.median = s.median;
    row.max = s.max;
  }
  return row;
}

}  // namespace

std::vector<RunOutcome> run_point(const FunctionRecipe& function, std::size_t n,
                                  const AlgorithmSpec& algorithm, double c, std::size_t runs,
                                  std::uint64_t base_seed, std::uint64_t domain,
                                  std::uint64_t budget, std::size_t workers,
                                  bool key_by_seed) {
  std::vector<Job> jobs(runs);
  for (std::size_t j = 0; j < runs; ++j) {
    const std::uint64_t seed = seed_mix(base_seed, domain, j);
    jobs[j] = {c, seed, key_by_seed ? seed : j};
  }
  std::vector<RunOutcome> outcomes;
  run_jobs(function, n, algorithm, budget, workers, jobs, outcomes);
  return outcomes;
}

SweepTable run_sweep(const SweepSpec& spec) {
  if (spec.runs < 1) throw std::invalid_argument("sweep: runs must be at least 1");
  if (spec.n < 1) throw std::invalid_argument("sweep: n must be positive");
  std::ofstream file;
  if (!spec.out.empty()) {
    file.open(spec.out, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("sweep: cannot open '" + spec.out + "' for writing");
  }

  const auto cs = spec.grid.values();
  std::vector<Job> jobs;
  jobs.reserve(cs.size() * spec.runs);
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < spec.runs; ++j)
      jobs.push_back({cs[i], seed_mix(spec.base_seed, i, j), j});

  std::vector<RunOutcome> outcomes;
  run_jobs(spec.function, spec.n, spec.algorithm, spec.budget, spec.workers, jobs, outcomes);

  SweepTable table;
  for (std::size_t i = 0; i < cs.size(); ++i)
    table.rows.push_back(summarize_row(
        cs[i], std::span<const RunOutcome>(outcomes).subspan(i * spec.runs, spec.runs)));

  if (file.is_open()) {
    file << table.to_csv();
    file.flush();
    if (!file) throw std::runtime_error("sweep: failed writing '" + spec.out + "'");
  }
  return table;
}

// ---------------------------------------------------------------------------
// Comparison

Sidedness parse_sidedness(std::string_view text) {
  if (text == "two") return Sidedness::TwoSided;
  if (text == "a-less") return Sidedness::ALess;
  if (text == "b-less") return Sidedness::BLess;
  parse_error("expected two, a-less or b-less", text, 0);
}

std::string to_string(Sidedness s) {
  switch (s) {
    case Sidedness::TwoSided:
      return "two";
    case Sidedness::ALess:
      return "a-less";
    case Sidedness::BLess:
      return "b-less";
  }
  return "?";
}

CompareResult compare(const CompareSpec& spec) {
  if (spec.runs < 1) throw std::invalid_argument("compare: runs must be at least 1");
  CompareResult r;
  r.a = run_point(spec.function, spec.n, spec.a, spec.c, spec.runs, spec.base_seed, 0,
                  spec.budget, spec.workers, true);
  r.b = run_point(spec.function, spec.n, spec.b, spec.c, spec.runs, spec.base_seed, 1,
                  spec.budget, spec.workers, true);

  auto counts = [](const std::vector<RunOutcome>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& o : v) out.push_back(static_cast<double>(o.evaluations));
    return out;
  };
  const auto xa = counts(r.a);
  const auto xb = counts(r.b);
  const auto mode = xa.size() + xb.size() <= stats::kExactMaxTotal ? stats::MWUMode::Exact
                                                                    : stats::MWUMode::Approx;
  r.mwu = stats::mann_whitney_u(xa, xb, mode);
  r.mean_a = stats::summarize(std::span<const double>(xa)).mean;
  r.mean_b = stats::summarize(std::span<const double>(xb)).mean;
  switch (spec.sided) {
    case Sidedness::TwoSided:
      r.p_value = r.mwu.p_value_two_sided;
      break;
    case Sidedness::ALess:
      r.p_value = r.mwu.p_value_one_sided_first_less;
      break;
    case Sidedness::BLess:
      r.p_value = r.mwu.p_value_one_sided_first_greater;
      break;
  }
  return r;
}

}  // namespace bbga
