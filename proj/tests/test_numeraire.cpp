#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsd/counterexample.hpp"
#include "gsd/numeraire.hpp"
#include "harness.hpp"

using namespace gsd;

namespace {

VecD vec(std::initializer_list<double> xs) {
  VecD v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Two-atom fair space with generators a=(2,1/2), b=(1,1); the optimizer has
// weights (1/2,1/2), mixture (3/2,3/4), and both expectations equal 1.
ConvexSetSpec kkt_binomial() {
  ConvexSetSpec set;
  set.space = ProbSpace({"u", "d"}, vec({0.5, 0.5}));
  set.generators = {vec({2.0, 0.5}), vec({1.0, 1.0})};
  return set;
}

ConvexSetSpec singleton_one() {
  ConvexSetSpec set;
  set.space = ProbSpace({"u", "d"}, vec({0.5, 0.5}));
  set.generators = {vec({1.0, 1.0})};
  return set;
}

}  // namespace

TEST_CASE("solver: singleton constant set") {
  const auto res = solve_numeraire(singleton_one());
  CHECK(res.fhat[0] == doctest::Approx(1.0));
  CHECK(res.fhat[1] == doctest::Approx(1.0));
  CHECK(res.certificate[0] == doctest::Approx(1.0));
  CHECK(res.log_value == doctest::Approx(0.0));
}

TEST_CASE("solver: closed-form two-generator optimum") {
  const auto res = solve_numeraire(kkt_binomial());
  CHECK(res.fhat[0] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(res.fhat[1] == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(res.weights[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(res.weights[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(res.certificate.maxCoeff() <= 1.0 + 1e-10);
  CHECK(res.certificate.minCoeff() >= 1.0 - 1e-9);  // complementary slackness

  // the certificate identity is exact in rational arithmetic at the
  // closed-form optimum (3/2, 3/4)
  VecQ p(2), a(2), b(2), fhat(2);
  p << Rational(1, 2), Rational(1, 2);
  a << Rational(2), Rational(1, 2);
  b << Rational(1), Rational(1);
  fhat << Rational(3, 2), Rational(3, 4);
  const ProbSpaceQ sq({"u", "d"}, p);
  CHECK(expectation<Rational>(a / fhat, sq) == Rational(1));
  CHECK(expectation<Rational>(b / fhat, sq) == Rational(1));
  // and the weighted certificate sums to 1 exactly for any simplex weights
  CHECK(Rational(1, 2) * expectation<Rational>(a / fhat, sq) +
            Rational(1, 2) * expectation<Rational>(b / fhat, sq) ==
        Rational(1));
}

TEST_CASE("solver: error paths") {
  auto unbounded = singleton_one();
  unbounded.rays = {vec({1.0, 0.0})};
  CHECK_THROWS_AS(solve_numeraire(unbounded), StructuralError);

  ConvexSetSpec dead;
  dead.space = ProbSpace({"u", "d"}, vec({0.5, 0.5}));
  dead.generators = {vec({1.0, 0.0}), vec({2.0, 0.0})};
  CHECK_THROWS_WITH_AS(solve_numeraire(dead),
                       "numeraire nonexistent: C does not meet the strictly positive cone",
                       DomainError);
}

TEST_CASE("verify_certificate") {
  CHECK(verify_certificate(vec({1.0, 1.0}), singleton_one()).pass);

  const auto set = kkt_binomial();
  const auto fail = verify_certificate(vec({1.0, 1.0}), set, 1e-10);
  CHECK_FALSE(fail.pass);
  CHECK(fail.values[0] == doctest::Approx(1.25));
  CHECK(fail.worst == 0);

  const auto pass = verify_certificate(vec({1.5, 0.75}), set, 1e-12);
  CHECK(pass.pass);
  CHECK(pass.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pass.values[1] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(verify_certificate(vec({1.0, 0.0}), set), DomainError);
}

TEST_CASE("first-kind arbitrage witness") {
  auto set = singleton_one();
  set.rays = {vec({0.0, 1.0})};
  const auto rep = afk_witness(set);
  REQUIRE(rep.witness.has_value());
  CHECK((*rep.witness)[1] == 1.0);

  const auto none = afk_witness(kkt_binomial());
  CHECK_FALSE(none.witness.has_value());
  CHECK(none.atomwise_sup[0] == doctest::Approx(2.0));
  CHECK(none.atomwise_sup[1] == doctest::Approx(1.0));

  auto zero_ray = singleton_one();
  zero_ray.rays = {vec({0.0, 0.0})};
  CHECK_FALSE(afk_witness(zero_ray).witness.has_value());
}

TEST_CASE("nested convergence: constant family") {
  const std::vector<ConvexSetSpec> sets(4, kkt_binomial());
  const auto rep =
      nested_numeraire_convergence(sets, NestDirection::Decreasing, kkt_binomial(), 1e-9);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.pass);
  for (double d : rep.distances) CHECK(d <= 1e-9);
  CHECK(rep.settled_index == 0);
}

TEST_CASE("nested convergence: non-nested family rejected") {
  ConvexSetSpec other = kkt_binomial();
  other.generators = {vec({3.0, 0.25})};
  CHECK_THROWS_AS(nested_numeraire_convergence({kkt_binomial(), other},
                                               NestDirection::Decreasing, other, 1e-9),
                  StructuralError);
}

TEST_CASE("counterexample: exact expectations and the universal bound") {
  for (int n = 1; n <= 10; ++n) {
    const auto inst = counterexample_instance(n, 10);
    CHECK(inst.golden == counterexample_golden_formula(n));
    CHECK(inst.golden <= Rational(1));
  }
  CHECK(counterexample_golden_formula(1) == Rational(4, 5));
  CHECK(counterexample_golden_formula(2) == Rational(23, 30));
  CHECK_THROWS_AS(counterexample_instance(0, 5), StructuralError);
  CHECK_THROWS_AS(counterexample_instance(6, 5), StructuralError);
}

TEST_CASE("counterexample: the solver picks fhat with weight one") {
  const auto inst = counterexample_instance(1, 1);
  const auto res = solve_numeraire(inst.set, 1e-10);
  const VecD fhat_d = to_double(inst.fhat);
  for (Eigen::Index a = 0; a < fhat_d.size(); ++a)
    CHECK(res.fhat[a] == doctest::Approx(fhat_d[a]).epsilon(1e-8));
  CHECK(res.weights[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(expectation<double>(to_double(inst.g) / res.fhat, inst.set.space) ==
        doctest::Approx(0.8).epsilon(1e-8));

  // cross-check against the naive grid oracle
  const auto grid = oracle::grid_numeraire(inst.set, 1000);
  CHECK(grid.weights[0] == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("counterexample: limit numeraire gap is exactly one sixth") {
  const auto fam = counterexample_family(6);
  std::vector<ConvexSetSpec> sets;
  for (const auto& inst : fam.instances) sets.push_back(inst.set);
  const auto rep = nested_numeraire_convergence(sets, NestDirection::Decreasing, fam.limit_set,
                                                1e-9, fam.analytic_limit);
  CHECK_FALSE(rep.hypothesis_ok);
  CHECK_FALSE(rep.pass);
  CHECK(rep.achieved_vs_limit == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  // the formal limit-set numeraire is the indicator of the surviving interval
  CHECK(rep.limit_numeraire[0] == doctest::Approx(1.0));
  CHECK(rep.limit_numeraire.tail(rep.limit_numeraire.size() - 1).maxCoeff() == 0.0);
}

TEST_CASE("property: certificates and grid-oracle agreement on random polytopes") {
  auto rng = harness::make_rng(10);
  std::uniform_int_distribution<int> gens_d(1, 3), atoms_d(2, 4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto set = harness::random_polytope(rng, gens_d(rng), atoms_d(rng));
    const auto res = solve_numeraire(set, 1e-10);
    CHECK(res.certificate.maxCoeff() <= 1.0 + 1e-10);
    CHECK(res.weights.minCoeff() >= 0.0);
    CHECK(res.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index j = 0; j < res.weights.size(); ++j)
      if (res.weights[j] > 1e-6) CHECK(res.certificate[j] == doctest::Approx(1.0).epsilon(1e-8));
    const auto grid = oracle::grid_numeraire(set, 500);
    CHECK(res.log_value >= grid.log_value - 1e-12);
    CHECK(res.log_value - grid.log_value <= 2.0 / 500.0);
  }
}

TEST_CASE("property: membership of the optimizer and containment sanity") {
  auto rng = harness::make_rng(11);
  for (int rep = 0; rep < 25; ++rep) {
    const auto set = harness::random_polytope(rng, 3, 3);
    const auto res = solve_numeraire(set, 1e-10);
    CHECK(contains(set, res.fhat, 1e-8));
    CHECK(contains_set(set, set));
  }
}
