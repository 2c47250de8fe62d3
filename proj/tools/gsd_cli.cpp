// Command-line front end: scenario loading, module dispatch, deterministic
// report emission, and the demo suite.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gsd/counterexample.hpp"
#include "gsd/gensup.hpp"
#include "gsd/market.hpp"
#include "gsd/numeraire.hpp"
#include "gsd/oracle.hpp"
#include "gsd/report.hpp"
#include "gsd/scenario.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 2;
constexpr int kExitStructural = 3;
constexpr int kExitTooLarge = 4;

struct Opts {
  std::string scenario;
  std::string set_name;
  std::string process_name;
  double tol = 1e-9;
  int max_iters = 10000;
  std::size_t max_strategies = 100000;
  std::string output = "json";
  std::string report_path;
  unsigned seed = 12345;
  int n_max = 10;
  int length = 200;
};

void add_common(CLI::App* cmd, Opts& o, bool needs_scenario) {
  if (needs_scenario)
    cmd->add_option("--scenario", o.scenario, "scenario JSON file")->required();
  cmd->add_option("--tol", o.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", o.max_iters, "solver iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--max-strategies", o.max_strategies, "pure-strategy enumeration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--output", o.output, "report format")
      ->check(CLI::IsMember({"json", "table"}));
  cmd->add_option("--report", o.report_path, "also write the JSON report to this path");
  cmd->add_option("--seed", o.seed, "RNG seed for demo instances");
}

// Flattens nested arrays/objects into dotted keys for the table renderer.
void flatten(const json& j, const std::string& prefix, json& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out[prefix] = j;
  }
}

int emit(json report, bool pass, const Opts& o) {
  report["pass"] = pass;
  const std::string serialized = gsd::dump_report(report);
  if (o.output == "json") {
    std::cout << serialized;
  } else {
    json flat = json::object();
    flatten(report, "", flat);
    std::cout << gsd::dump_table(flat);
  }
  if (!o.report_path.empty()) {
    std::ofstream out(o.report_path);
    if (!out) throw gsd::StructuralError("cannot write report to '" + o.report_path + "'");
    out << serialized;
  }
  return pass ? kExitPass : kExitViolation;
}

const gsd::ConvexSetSpec& pick_set(const gsd::Scenario& sc, const std::string& name) {
  if (sc.sets.empty()) throw gsd::StructuralError("scenario defines no sets");
  if (name.empty()) {
    if (sc.sets.size() > 1)
      throw gsd::StructuralError("scenario has several sets; pick one with --set");
    return sc.sets.begin()->second;
  }
  const auto it = sc.sets.find(name);
  if (it == sc.sets.end()) throw gsd::StructuralError("no set named '" + name + "'");
  return it->second;
}

const gsd::MatD& pick_process(const gsd::Scenario& sc, const std::string& name) {
  if (sc.processes.empty()) throw gsd::StructuralError("scenario defines no processes");
  if (name.empty()) {
    if (sc.processes.size() > 1)
      throw gsd::StructuralError("scenario has several processes; pick one with --process");
    return sc.processes.begin()->second;
  }
  const auto it = sc.processes.find(name);
  if (it == sc.processes.end()) throw gsd::StructuralError("no process named '" + name + "'");
  return it->second;
}

const gsd::MarketSpec& pick_market(const gsd::Scenario& sc) {
  if (!sc.market) throw gsd::StructuralError("scenario defines no market");
  return *sc.market;
}

int cmd_numeraire_solve(const Opts& o) {
  const gsd::Scenario sc = gsd::load_scenario(o.scenario);
  const auto& set = pick_set(sc, o.set_name);
  const auto res = gsd::solve_numeraire(set, o.tol, o.max_iters);
  json r;
  r["fhat"] = gsd::to_json(res.fhat);
  r["weights"] = gsd::to_json(res.weights);
  r["certificate"] = gsd::to_json(res.certificate);
  r["log_value"] = res.log_value;
  r["iterations"] = res.iterations;
  return emit(std::move(r), true, o);
}

// JSON has no infinity literal; report unbounded ratios as a string.
json finite_or_str(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

int cmd_gensup_check(const Opts& o) {
  const gsd::Scenario sc = gsd::load_scenario(o.scenario);
  const auto& Z = pick_process(sc, o.process_name);
  const auto rep = gsd::check_generalized_supermartingale(Z, sc.filt, sc.space, o.tol);
  json r;
  r["violations"] = json::array();
  for (const auto& v : rep.violations)
    r["violations"].push_back(
        {{"s", v.s}, {"t", v.t}, {"cell", v.cell}, {"value", finite_or_str(v.value)}});
  r["resurrection_events"] = json::array();
  for (const auto& e : rep.resurrection_events)
    r["resurrection_events"].push_back({{"s", e.s}, {"t", e.t}, {"atom", e.atom}});
  return emit(std::move(r), rep.pass(), o);
}

int cmd_market_validate(const Opts& o) {
  const gsd::Scenario sc = gsd::load_scenario(o.scenario);
  const auto v = gsd::validate_market(pick_market(sc));
  json r;
  r["issues"] = v.issues;
  return emit(std::move(r), v.ok, o);
}

int cmd_market_deflator(const Opts& o) {
  const gsd::Scenario sc = gsd::load_scenario(o.scenario);
  const auto rep = gsd::construct_deflator(pick_market(sc), o.tol, o.max_strategies);
  json r;
  r["Y"] = gsd::to_json(rep.Y);
  r["worst_certificate"] = rep.worst_certificate;
  r["adapted_natural"] = rep.adapted_natural;
  r["violation_count"] = rep.violations.size();
  r["resurrecting_strategies"] = rep.resurrecting_strategies;
  return emit(std::move(r), rep.pass, o);
}

int cmd_market_numeraire(const Opts& o) {
  const gsd::Scenario sc = gsd::load_scenario(o.scenario);
  const auto rep = gsd::numeraire_wealth(pick_market(sc), o.tol, o.max_strategies);
  json r;
  r["xhat"] = gsd::to_json(rep.xhat);
  r["weights"] = gsd::to_json(rep.weights);
  r["worst_certificate"] = rep.worst_certificate;
  return emit(std::move(r), rep.pass, o);
}

int cmd_market_na1(const Opts& o) {
  const gsd::Scenario sc = gsd::load_scenario(o.scenario);
  const auto rep = gsd::na1_report(pick_market(sc), o.tol, o.max_strategies);
  json r;
  r["bound"] = gsd::to_json(rep.bound);
  r["bounded"] = rep.bounded;
  r["na1"] = rep.na1;
  r["terminal_certificates_ok"] = rep.terminal_certificates_ok;
  r["markov_ok"] = rep.markov_ok;
  const bool pass = rep.bounded && rep.na1 && rep.terminal_certificates_ok && rep.markov_ok;
  return emit(std::move(r), pass, o);
}

std::string rat_str(const gsd::Rational& q) {
  std::ostringstream out;
  out << q;
  return out.str();
}

int cmd_demo_counterexample(const Opts& o) {
  if (o.n_max < 1) throw gsd::StructuralError("--n-max must be at least 1");
  const auto fam = gsd::counterexample_family(o.n_max);
  json rows = json::array();
  bool all_bounded = true;
  for (const auto& inst : fam.instances) {
    const gsd::Rational formula = gsd::counterexample_golden_formula(inst.n);
    const bool match = inst.golden == formula;
    const bool bounded = inst.golden <= 1;
    all_bounded = all_bounded && match && bounded;
    rows.push_back({{"n", inst.n},
                    {"expectation", rat_str(inst.golden)},
                    {"closed_form", rat_str(formula)},
                    {"matches_closed_form", match},
                    {"at_most_one", bounded}});
  }
  json r;
  r["rows"] = std::move(rows);

  // the nonincreasing family has numeraires converging outside the limit
  // set's strictly positive cone; the Ky Fan gap to the formal limit-set
  // numeraire is exactly 1/6
  std::vector<gsd::ConvexSetSpec> sets;
  for (const auto& inst : fam.instances) sets.push_back(inst.set);
  const auto conv = gsd::nested_numeraire_convergence(
      sets, gsd::NestDirection::Decreasing, fam.limit_set, o.tol, fam.analytic_limit);
  r["convergence"] = {{"hypothesis_ok", conv.hypothesis_ok},
                      {"converges_to_limit_set_numeraire", conv.pass},
                      {"achieved_vs_limit_numeraire", conv.achieved_vs_limit},
                      {"limit_numeraire", gsd::to_json(conv.limit_numeraire)},
                      {"achieved_limit", gsd::to_json(conv.achieved_limit)}};
  const bool pass = all_bounded && !conv.hypothesis_ok && !conv.pass;
  return emit(std::move(r), pass, o);
}

// E[xi] <= 1 with xi -> 1 atomwise; used to build sandwich instances.
gsd::VecD noisy_unit(std::mt19937& rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  gsd::VecD v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std::max(0.05, 1.0 + scale * u(rng));
  return v;
}

gsd::ProbSpace demo_space(std::mt19937& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  gsd::VecD p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = u(rng);
  p /= p.sum();
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
  return gsd::ProbSpace(std::move(labels), std::move(p));
}

int cmd_demo_sandwich(const Opts& o) {
  std::mt19937 rng(o.seed);
  std::cout << "seed " << o.seed << "\n";
  const auto space = demo_space(rng, 3);
  std::vector<gsd::VecD> g_seq, h_seq;
  for (int n = 1; n <= o.length; ++n) {
    gsd::VecD g = noisy_unit(rng, space.size(), 1.0 / (n + 1));
    g /= std::max(1.0, gsd::expectation(g, space));
    gsd::VecD h = 1.0 / g;
    h /= std::max(1.0, gsd::expectation(h, space));
    g_seq.push_back(std::move(g));
    h_seq.push_back(std::move(h));
  }
  const auto rep = gsd::sandwich_check(g_seq, h_seq, space, o.tol > 1e-6 ? o.tol : 1e-3);
  json r;
  r["hypotheses_ok"] = rep.hypotheses_ok;
  r["hypothesis_failure"] = rep.hypothesis_failure;
  r["E_g"] = rep.e_g;
  r["E_h"] = rep.e_h;
  r["d_product_to_1"] = rep.d_product;
  r["E_sqrt_gh"] = rep.e_sqrt_gh;
  r["E_sq_root_diff"] = rep.e_sq_diff;
  r["d_g_to_1"] = rep.d_g;
  r["d_h_to_1"] = rep.d_h;
  r["derived_tol"] = rep.derived_tol;
  r["trace"] = json::array();
  for (std::size_t n = 0; n < rep.d_g_seq.size(); n += std::max<std::size_t>(1, rep.d_g_seq.size() / 20))
    r["trace"].push_back({{"n", n + 1},
                          {"d_g", rep.d_g_seq[n]},
                          {"d_h", rep.d_h_seq[n]},
                          {"d_product", rep.d_product_seq[n]}});
  return emit(std::move(r), rep.hypotheses_ok && rep.pass, o);
}

int cmd_demo_komlos(const Opts& o) {
  std::mt19937 rng(o.seed);
  std::cout << "seed " << o.seed << "\n";
  const auto space = demo_space(rng, 3);
  std::vector<gsd::VecD> clusters;
  for (int c = 0; c < 3; ++c) clusters.push_back(noisy_unit(rng, space.size(), 0.8));
  std::vector<gsd::VecD> seq;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < o.length; ++n) {
    gsd::VecD f = clusters[static_cast<std::size_t>(n % 3)];
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] += u(rng) / (n + 2);
    seq.push_back(std::move(f));
  }
  const auto res = gsd::komlos_select(seq, space, o.tol > 1e-6 ? o.tol : 1e-3);
  json r;
  r["limit"] = gsd::to_json(res.limit);
  r["selected"] = res.indices;
  r["distances"] = res.distances;
  bool tail_ok = true;
  for (std::size_t n = 0; n < res.indices.size(); ++n)
    tail_ok = tail_ok && res.indices[n] >= n && (n == 0 || res.indices[n] > res.indices[n - 1]);
  r["tail_membership_ok"] = tail_ok;
  const bool pass = tail_ok && !res.distances.empty() && res.distances.back() <= 1e-3;
  return emit(std::move(r), pass, o);
}

int cmd_demo_discrete_limit(const Opts& o) {
  std::mt19937 rng(o.seed);
  std::cout << "seed " << o.seed << "\n";
  const auto space = demo_space(rng, 3);
  // g_n = a + b 2^{-n}: ratios g_n/g_m <= 1 atomwise for n >= m
  const gsd::VecD a = noisy_unit(rng, space.size(), 0.5);
  const gsd::VecD b = noisy_unit(rng, space.size(), 0.5);
  std::vector<gsd::VecD> seq;
  double w = 1.0;
  for (int n = 0; n < o.length; ++n, w *= 0.5) seq.push_back(a + w * b);
  const auto rep = gsd::discrete_limit_check(seq, space, o.tol > 1e-6 ? o.tol : 1e-6);
  json r;
  r["hypotheses_ok"] = rep.hypotheses_ok;
  r["hypothesis_failure"] = rep.hypothesis_failure;
  r["worst_pair_expectation"] = rep.worst_pair_expectation;
  r["hull_min"] = rep.hull_min;
  r["cauchy_index"] = rep.cauchy_index;
  r["limit"] = gsd::to_json(rep.limit);
  return emit(std::move(r), rep.hypotheses_ok && rep.pass, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-instance deflator and numeraire toolkit"};
  app.require_subcommand(1);
  Opts o;
  int (*handler)(const Opts&) = nullptr;

  auto* numeraire = app.add_subcommand("numeraire", "numeraire solver");
  auto* solve = numeraire->add_subcommand("solve", "expected-log numeraire with certificate");
  solve->add_option("--set", o.set_name, "set name inside the scenario");
  add_common(solve, o, true);
  solve->callback([&] { handler = cmd_numeraire_solve; });

  auto* gensup = app.add_subcommand("gensup", "generalized supermartingale checks");
  auto* check = gensup->add_subcommand("check", "verify the defining inequality");
  check->add_option("--process", o.process_name, "process name inside the scenario");
  add_common(check, o, true);
  check->callback([&] { handler = cmd_gensup_check; });

  auto* market = app.add_subcommand("market", "wealth-process set operations");
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const Opts&);
  };
  for (const Sub& s : {Sub{"validate", "structural hypotheses", cmd_market_validate},
                       Sub{"deflator", "construct and verify the deflator", cmd_market_deflator},
                       Sub{"numeraire", "numeraire wealth process", cmd_market_numeraire},
                       Sub{"na1", "boundedness in probability report", cmd_market_na1}}) {
    auto* cmd = market->add_subcommand(s.name, s.help);
    add_common(cmd, o, true);
    auto fn = s.fn;
    cmd->callback([&, fn] { handler = fn; });
  }

  auto* demo = app.add_subcommand("demo", "reproducible demonstrations");
  auto* ce = demo->add_subcommand("counterexample", "exact expectation family and its limit gap");
  ce->add_option("--n-max", o.n_max, "largest family index");
  add_common(ce, o, false);
  ce->callback([&] { handler = cmd_demo_counterexample; });
  for (const Sub& s :
       {Sub{"sandwich", "two-sequence squeeze to 1", cmd_demo_sandwich},
        Sub{"komlos", "tail-subsequence selection", cmd_demo_komlos},
        Sub{"discrete-limit", "pairwise-dominated sequence limit", cmd_demo_discrete_limit}}) {
    auto* cmd = demo->add_subcommand(s.name, s.help);
    cmd->add_option("--length", o.length, "sequence length");
    add_common(cmd, o, false);
    auto fn = s.fn;
    cmd->callback([&, fn] { handler = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return handler(o);
  } catch (const gsd::TooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTooLarge;
  } catch (const gsd::NonconvergenceError& e) {
    std::cerr << "error: " << e.what() << " (worst violation " << e.worst_violation << ")\n";
    return kExitViolation;
  } catch (const gsd::StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStructural;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStructural;
  }
}
