// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runtime limits are enforced with wall-clock measurements.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gsd/counterexample.hpp"
#include "gsd/gensup.hpp"
#include "gsd/market.hpp"
#include "gsd/numeraire.hpp"
#include "harness.hpp"

using namespace gsd;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " — " << detail
            << "\n";
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// parallel-for over [0, n); every worker owns disjoint indices
void parallel_for(int n, const std::function<void(int)>& body) {
  const unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n_threads; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& t : pool) t.join();
}

std::string rat_str(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

// 1. Exact golden expectations reproduced by the demo subcommand.
void criterion_1() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;

  for (int n = 1; n <= 10 && ok; ++n) {
    const auto inst = counterexample_instance(n, 10);
    if (inst.golden != counterexample_golden_formula(n) || inst.golden > 1) {
      ok = false;
      detail = "exact expectation mismatch at n=" + std::to_string(n);
    }
  }
  if (ok && (counterexample_golden_formula(1) != Rational(4, 5) ||
             counterexample_golden_formula(2) != Rational(23, 30))) {
    ok = false;
    detail = "closed form disagrees with the anchored values 4/5 and 23/30";
  }

  const char* bin = std::getenv("GSD_CLI_BIN");
  if (ok && bin == nullptr) {
    ok = false;
    detail = "GSD_CLI_BIN not set";
  }
  if (ok) {
    const std::string report_path = "acceptance_counterexample.json";
    const std::string cmd = std::string("\"") + bin +
                            "\" demo counterexample --n-max 10 --output json --report " +
                            report_path + " > /dev/null";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      ok = false;
      detail = "demo subcommand exited with " + std::to_string(rc);
    } else {
      std::ifstream in(report_path);
      nlohmann::json j;
      in >> j;
      const auto& rows = j.at("rows");
      ok = rows.size() == 10 && rows[0].at("expectation") == "4/5" &&
           rows[1].at("expectation") == "23/30";
      for (const auto& row : rows)
        ok = ok && row.at("matches_closed_form").get<bool>() && row.at("at_most_one").get<bool>();
      if (!ok) detail = "demo report rows disagree with the exact values";
    }
  }

  const double elapsed = seconds_since(start);
  if (ok && elapsed >= 1.0) {
    ok = false;
    detail = "runtime " + std::to_string(elapsed) + "s exceeds 1s";
  }
  if (ok)
    detail = "E[g^n/fhat^n] exact for n=1..10 (4/5, 23/30, ...), all <= 1, " +
             std::to_string(elapsed) + "s";
  report(1, ok, detail);
}

// 2. The nested family's numeraires converge outside the limit set; the gap
//    to the formal limit-set numeraire is exactly 1/6.
void criterion_2() {
  const auto start = Clock::now();
  const auto fam = counterexample_family(10);
  std::vector<ConvexSetSpec> sets;
  for (const auto& inst : fam.instances) sets.push_back(inst.set);
  const auto rep = nested_numeraire_convergence(sets, NestDirection::Decreasing, fam.limit_set,
                                                1e-9, fam.analytic_limit);
  const double elapsed = seconds_since(start);
  const double gap = std::abs(rep.achieved_vs_limit - 1.0 / 6.0);
  const bool ok = !rep.hypothesis_ok && !rep.pass && gap <= 1e-9 && elapsed < 5.0;
  report(2, ok,
         "hypothesis flagged=" + std::string(rep.hypothesis_ok ? "no" : "yes") +
             ", |d - 1/6| = " + std::to_string(gap) + ", " + std::to_string(elapsed) + "s");
}

// 3. Certificate-exact solver vs. the exhaustive grid oracle.
void criterion_3() {
  const auto start = Clock::now();
  const int n_instances = 500;
  std::atomic<int> cert_fail{0}, grid_fail{0};
  std::vector<std::mt19937> rngs;
  for (int i = 0; i < n_instances; ++i) rngs.emplace_back(harness::test_seed() + 1000u + i);

  parallel_for(n_instances, [&](int i) {
    auto& rng = rngs[static_cast<std::size_t>(i)];
    std::uniform_int_distribution<int> gens_d(1, 3), atoms_d(2, 4);
    const auto set = harness::random_polytope(rng, gens_d(rng), atoms_d(rng));
    const auto res = solve_numeraire(set, 1e-10);
    if (res.certificate.maxCoeff() > 1.0 + 1e-10) ++cert_fail;
    const auto grid = oracle::grid_numeraire(set, 2000);
    if (std::abs(res.log_value - grid.log_value) > 1e-3) ++grid_fail;
  });

  const double elapsed = seconds_since(start);
  const bool ok = cert_fail == 0 && grid_fail == 0 && elapsed < 60.0;
  report(3, ok,
         std::to_string(n_instances) + " polytopes, certificate failures " +
             std::to_string(cert_fail.load()) + ", oracle mismatches " +
             std::to_string(grid_fail.load()) + ", " + std::to_string(elapsed) + "s");
}

// 4. Deflator round trip and the Markov cross-check on random markets.
void criterion_4() {
  const auto start = Clock::now();
  const int n_instances = 200;
  std::atomic<int> deflator_fail{0}, markov_fail{0};
  std::vector<std::mt19937> rngs;
  for (int i = 0; i < n_instances; ++i) rngs.emplace_back(harness::test_seed() + 2000u + i);

  parallel_for(n_instances, [&](int i) {
    auto& rng = rngs[static_cast<std::size_t>(i)];
    const auto m = harness::random_market(rng);
    if (!construct_deflator(m, 1e-9).pass) ++deflator_fail;
    const auto na1 = na1_report(m, 1e-9);
    if (!na1.markov_ok || !na1.terminal_certificates_ok || !na1.bounded) ++markov_fail;
  });

  const double elapsed = seconds_since(start);
  const bool ok = deflator_fail == 0 && markov_fail == 0 && elapsed < 120.0;
  report(4, ok,
         std::to_string(n_instances) + " markets, deflator failures " +
             std::to_string(deflator_fail.load()) + ", Markov cross-check failures " +
             std::to_string(markov_fail.load()) + ", " + std::to_string(elapsed) + "s");
}

// 5. Uniqueness under permutation and change-of-numeraire invariance.
void criterion_5() {
  auto rng = harness::make_rng(3000);
  bool ok = true;
  std::string detail = "permutation and change-of-numeraire invariance on 25 markets";
  for (int i = 0; i < 25 && ok; ++i) {
    const auto m = harness::random_market(rng);
    const auto base = numeraire_wealth(m, 1e-9);

    MarketSpec permuted = m;
    std::reverse(permuted.names.begin(), permuted.names.end());
    std::reverse(permuted.generators.begin(), permuted.generators.end());
    const int n = static_cast<int>(m.generators.size());
    for (int& j : permuted.strictly_positive) j = n - 1 - j;
    const auto swapped = numeraire_wealth(permuted, 1e-9);
    if (((swapped.xhat - base.xhat).abs() > 1e-9).any()) {
      ok = false;
      detail = "permuted input changed xhat at market " + std::to_string(i);
    }

    const auto defl = construct_deflator(m, 1e-9);
    const int xbar = m.strictly_positive.front();
    const auto transformed = construct_deflator(denominate(m, xbar), 1e-9);
    const MatD expected = defl.Y * m.generators[static_cast<std::size_t>(xbar)];
    if (((transformed.Y - expected).abs() > 1e-9).any()) {
      ok = false;
      detail = "change of numeraire broke Y-bar = Y * X-bar at market " + std::to_string(i);
    }
    if (((base.xhat * defl.Y - 1.0).abs() > 1e-9).any()) {
      ok = false;
      detail = "xhat * Y differs from 1 at market " + std::to_string(i);
    }
  }
  report(5, ok, detail);
}

// 6. Lemma suites: hypothesis-satisfying instances pass, mutated ones are
//    flagged, and the selection lemma delivers a tight tail.
void criterion_6() {
  auto rng = harness::make_rng(4000);
  int sandwich_fail = 0, discrete_fail = 0, mutation_miss = 0;
  for (int i = 0; i < 100; ++i) {
    const auto space = harness::random_space(rng, 3).second;
    std::vector<VecD> g_seq, h_seq;
    harness::sandwich_instance(rng, space, 150, g_seq, h_seq);
    const auto s = sandwich_check(g_seq, h_seq, space, 1e-2);
    if (!s.hypotheses_ok || !s.pass) ++sandwich_fail;

    auto mutated = g_seq;
    mutated.back() *= (1.0 + 1e-3) / expectation<double>(mutated.back(), space);
    if (sandwich_check(mutated, h_seq, space, 1e-4).hypotheses_ok) ++mutation_miss;

    auto seq = harness::discrete_instance(rng, space, 40);
    const auto d = discrete_limit_check(seq, space, 1e-6);
    if (!d.hypotheses_ok || !d.pass) ++discrete_fail;

    seq.back() = seq[0] * (1.0 + 2e-3);
    if (discrete_limit_check(seq, space, 1e-4).hypotheses_ok) ++mutation_miss;
  }

  int komlos_fail = 0;
  for (int i = 0; i < 20; ++i) {
    const auto space = harness::random_space(rng, 3).second;
    const auto seq = harness::komlos_instance(rng, space, 200);
    const auto res = komlos_select(seq, space, 1e-3);
    bool good = !res.distances.empty() && res.distances.back() < 1e-3;
    for (std::size_t n = 0; n < res.indices.size(); ++n) {
      good = good && res.indices[n] >= n;
      if (n > 0) good = good && res.indices[n] > res.indices[n - 1];
    }
    if (!good) ++komlos_fail;
  }

  const bool ok = sandwich_fail == 0 && discrete_fail == 0 && mutation_miss == 0 && komlos_fail == 0;
  report(6, ok,
         "sandwich failures " + std::to_string(sandwich_fail) + ", discrete failures " +
             std::to_string(discrete_fail) + ", missed mutations " +
             std::to_string(mutation_miss) + ", selection failures " +
             std::to_string(komlos_fail));
}

// 7. The ratio-based checker coincides with the classical cellwise test on
//    adapted strictly positive processes.
void criterion_7() {
  auto rng = harness::make_rng(5000);
  int disagreements = 0;
  std::uniform_int_distribution<int> atoms_d(2, 4), times_d(2, 4);
  for (int i = 0; i < 100; ++i) {
    const int n_atoms = atoms_d(rng);
    const auto grid = harness::grid_of(static_cast<std::size_t>(times_d(rng)));
    const auto space = harness::random_space(rng, n_atoms).second;
    const auto filt = harness::random_filtration(rng, grid, n_atoms);
    const MatD Z = harness::random_adapted_positive(rng, filt, n_atoms);
    const bool generalized = check_generalized_supermartingale(Z, filt, space, 1e-9).pass();
    const bool classical = oracle::classical_supermartingale_check(Z, filt, space, 1e-9);
    if (generalized != classical) ++disagreements;
  }
  report(7, disagreements == 0,
         "100 adapted processes, checker disagreements " + std::to_string(disagreements));
}

}  // namespace

int main() {
  std::cout << "acceptance suite (seed " << harness::test_seed() << ")\n";
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
