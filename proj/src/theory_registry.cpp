#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "bbga/theory.hpp"
#include "text_util.hpp"

namespace bbga::theory {
namespace {

using Args = std::map<std::string, double>;

struct Entry {
  FormulaInfo info;
  std::function<BoundReport(const Args&)> eval;
};

std::size_t as_count(const Args& a, const std::string& name) {
  const double v = a.at(name);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
    throw std::invalid_argument("theory: parameter '" + name + "' must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

BoundReport plain(const std::string& id, double value) { return {value, id, false, std::nullopt}; }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"lb_mutation_based", {"n", "p"}},
       [](const Args& a) { return lb_mutation_based(as_count(a, "n"), a.at("p")); }},
      {{"ub_ga_dominant", {"n", "c"}},
       [](const Args& a) { return ub_ga_dominant(a.at("n"), a.at("c")); }},
      {{"ub_ga_full", {"n", "p", "mu", "lambda"}},
       [](const Args& a) {
         return ub_ga_full(a.at("n"), a.at("p"), as_count(a, "mu"), as_count(a, "lambda"));
       }},
      {{"lb_greedy_ga_dominant", {"n", "c"}},
       [](const Args& a) { return lb_greedy_ga_dominant(a.at("n"), a.at("c")); }},
      {{"max_term", {"c"}},
       [](const Args& a) { return plain("max_term", max_term(a.at("c")).value); }},
      {{"runtime_coefficient", {"c"}},
       [](const Args& a) { return plain("runtime_coefficient", runtime_coefficient(a.at("c"))); }},
      {{"optimal_c", {}}, [](const Args&) { return plain("optimal_c", optimal_c()); }},
      {{"separating_odd", {"N", "d", "k"}},
       [](const Args& a) {
         return plain("separating_odd",
                      separating_odd_probability(as_count(a, "N"), as_count(a, "d"),
                                                 as_count(a, "k")));
       }},
      {{"surplus_prob", {"d"}},
       [](const Args& a) { return plain("surplus_prob", surplus_prob(as_count(a, "d"))); }},
      {{"neutral_mutation_prob", {"n", "i", "p"}},
       [](const Args& a) {
         return plain("neutral_mutation_prob",
                      neutral_mutation_prob_exact(as_count(a, "n"), as_count(a, "i"), a.at("p")));
       }},
      {{"jump_prob_bound", {"n", "i", "p"}},
       [](const Args& a) {
         return jump_prob_bound(as_count(a, "n"), as_count(a, "i"), a.at("p"));
       }},
      {{"jump_prob_exact", {"n", "i", "p"}},
       [](const Args& a) {
         return plain("jump_prob_exact",
                      jump_prob_exact(as_count(a, "n"), as_count(a, "i"), a.at("p")));
       }},
  };
  return table;
}

}  // namespace

const std::vector<FormulaInfo>& formula_registry() {
  static const std::vector<FormulaInfo> infos = [] {
    std::vector<FormulaInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

std::string theory_report(const std::string& id, const std::vector<std::string>& args) {
  const Entry* entry = nullptr;
  for (const auto& e : entries())
    if (e.info.id == id) entry = &e;
  if (entry == nullptr) {
    std::string known;
    for (const auto& e : entries()) known += (known.empty() ? "" : ", ") + e.info.id;
    throw std::invalid_argument("unknown formula '" + id + "'; known formulas: " + known);
  }

  Args parsed;
  for (const auto& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos)
      detail::parse_error("expected name=value", arg, 0);
    const std::string name = arg.substr(0, eq);
    bool known = false;
    for (const auto& p : entry->info.params) known = known || p == name;
    if (!known) detail::parse_error("unknown parameter '" + name + "' for " + id, arg, 0);
    if (parsed.count(name) != 0) detail::parse_error("repeated parameter", arg, 0);
    const detail::Token tok{std::string_view(arg).substr(eq + 1), eq + 1};
    parsed[name] = detail::parse_number<double>(tok, arg, "a number");
  }
  for (const auto& p : entry->info.params)
    if (parsed.count(p) == 0)
      throw std::invalid_argument("formula " + id + " needs parameter '" + p + "'");

  const BoundReport r = entry->eval(parsed);
  std::string line = id;
  for (const auto& p : entry->info.params)
    line += "," + p + "=" + detail::format_double(parsed.at(p));
  line += "," + detail::format_double(r.value);
  line += r.dominant_only ? ",true" : ",false";
  return line;
}

}  // namespace bbga::theory
