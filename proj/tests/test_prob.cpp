#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gsd/prob.hpp"
#include "harness.hpp"

using namespace gsd;

namespace {

ProbSpace uniform4() {
  return ProbSpace({"a", "b", "c", "d"}, VecD::Constant(4, 0.25));
}

VecD vec(std::initializer_list<double> xs) {
  VecD v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("probability space invariants") {
  CHECK_THROWS_AS(ProbSpace({"a", "b"}, vec({0.5, 0.0})), StructuralError);
  CHECK_THROWS_AS(ProbSpace({"a", "b"}, vec({0.5, 0.6})), StructuralError);
  CHECK_THROWS_AS(ProbSpace({"a", "a"}, vec({0.5, 0.5})), StructuralError);
  VecQ q(2);
  q[0] = Rational(1, 3);
  q[1] = Rational(2, 3);
  CHECK_NOTHROW(ProbSpaceQ({"a", "b"}, q));
  q[1] = Rational(2, 3) + Rational(1, 1000000000000LL);
  CHECK_THROWS_AS(ProbSpaceQ({"a", "b"}, q), StructuralError);
}

TEST_CASE("time grid invariants") {
  CHECK_THROWS_AS(TimeGrid({0.0}), StructuralError);
  CHECK_THROWS_AS(TimeGrid({1.0, 2.0}), StructuralError);
  CHECK_THROWS_AS(TimeGrid({0.0, 2.0, 2.0}), StructuralError);
  CHECK_NOTHROW(TimeGrid({0.0, 0.5, 2.0}));
}

TEST_CASE("conditional expectation: cell averages") {
  const auto space = uniform4();
  const Partition part{{0, 1}, {2, 3}};
  const VecD ce = cond_exp<double>(vec({1, 3, 5, 7}), part, space);
  CHECK(ce[0] == doctest::Approx(2.0));
  CHECK(ce[1] == doctest::Approx(2.0));
  CHECK(ce[2] == doctest::Approx(6.0));
  CHECK(ce[3] == doctest::Approx(6.0));
}

TEST_CASE("conditional expectation: trivial partition gives total expectation") {
  const auto space = uniform4();
  const VecD rv = vec({1, 3, 5, 7});
  const VecD ce = cond_exp<double>(rv, {{0, 1, 2, 3}}, space);
  const double e = expectation<double>(rv, space);
  for (Eigen::Index a = 0; a < 4; ++a) CHECK(ce[a] == doctest::Approx(e));
}

TEST_CASE("conditional expectation: infinity propagates to the whole cell") {
  const ProbSpace space({"u", "d"}, vec({0.5, 0.5}));
  const VecD rv = vec({std::numeric_limits<double>::infinity(), 0.0});
  const VecD ce = cond_exp<double>(rv, {{0, 1}}, space);
  CHECK(std::isinf(ce[0]));
  CHECK(std::isinf(ce[1]));
}

TEST_CASE("conditional expectation: invalid partitions rejected") {
  const auto space = uniform4();
  CHECK_THROWS_AS(cond_exp<double>(vec({1, 1, 1, 1}), {{0, 1}}, space), StructuralError);
  CHECK_THROWS_AS(cond_exp<double>(vec({1, 1, 1, 1}), {{0, 1}, {1, 2, 3}}, space),
                  StructuralError);
}

TEST_CASE("ratio conventions") {
  CHECK(ratio_conventional(vec({0.0}), vec({0.0}))[0] == 1.0);
  CHECK(std::isinf(ratio_conventional(vec({2.0}), vec({0.0}))[0]));
  CHECK(ratio_conventional(vec({1.0}), vec({2.0}))[0] == doctest::Approx(0.5));

  VecQ num(1), den(1);
  num[0] = 0;
  den[0] = 0;
  CHECK(ratio_conventional(num, den)[0] == Rational(1));
  num[0] = 2;
  CHECK_THROWS_AS(ratio_conventional(num, den), DomainError);
}

TEST_CASE("ratio of a variable with itself is one, including at zero") {
  auto rng = harness::make_rng(1);
  std::uniform_int_distribution<int> v(0, 8);
  for (int rep = 0; rep < 50; ++rep) {
    VecD z(4);
    for (Eigen::Index a = 0; a < 4; ++a) z[a] = v(rng) / 2.0;
    const VecD r = ratio_conventional(z, z);
    for (Eigen::Index a = 0; a < 4; ++a) CHECK(r[a] == 1.0);
  }
}

TEST_CASE("Ky Fan distance examples") {
  const ProbSpace space({"u", "d"}, vec({0.5, 0.5}));
  const VecD f = vec({0, 2}), g = vec({0, 0});
  CHECK(ky_fan_distance<double>(f, f, space) == 0.0);
  CHECK(ky_fan_distance<double>(VecD::Zero(2), VecD::Ones(2), space) == doctest::Approx(1.0));
  CHECK(ky_fan_distance<double>(f, g, space) == doctest::Approx(0.5));
  const VecD inf = vec({std::numeric_limits<double>::infinity(), 0});
  CHECK_THROWS_AS(ky_fan_distance<double>(inf, g, space), DomainError);
}

TEST_CASE("Ky Fan distance: triangle inequality on random triples") {
  auto rng = harness::make_rng(2);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  const auto space = harness::random_space(rng, 4).second;
  for (int rep = 0; rep < 100; ++rep) {
    VecD f(4), g(4), h(4);
    for (Eigen::Index a = 0; a < 4; ++a) {
      f[a] = u(rng);
      g[a] = u(rng);
      h[a] = u(rng);
    }
    const double fg = ky_fan_distance<double>(f, g, space);
    const double gh = ky_fan_distance<double>(g, h, space);
    const double fh = ky_fan_distance<double>(f, h, space);
    CHECK(fh <= fg + gh + 1e-15);
    CHECK(fg == doctest::Approx(ky_fan_distance<double>(g, f, space)));
  }
}

TEST_CASE("tower property, exact on rationals") {
  auto rng = harness::make_rng(3);
  std::uniform_int_distribution<int> v(0, 12);
  for (int rep = 0; rep < 50; ++rep) {
    const auto sq = harness::random_space(rng, 4).first;
    VecQ rv(4);
    for (Eigen::Index a = 0; a < 4; ++a) rv[a] = Rational(v(rng), 4);
    const Partition fine{{0}, {1}, {2, 3}};
    const Partition coarse{{0, 1}, {2, 3}};
    const VecQ once = cond_exp<Rational>(rv, coarse, sq);
    const VecQ twice = cond_exp<Rational>(cond_exp<Rational>(rv, fine, sq), coarse, sq);
    for (Eigen::Index a = 0; a < 4; ++a) CHECK(once[a] == twice[a]);
    // total expectation is preserved exactly
    CHECK(expectation<Rational>(once, sq) == expectation<Rational>(rv, sq));
  }
}

TEST_CASE("partition refinement") {
  CHECK(refines({{0}, {1}, {2, 3}}, {{0, 1}, {2, 3}}, 4));
  CHECK_FALSE(refines({{0, 2}, {1, 3}}, {{0, 1}, {2, 3}}, 4));
}

TEST_CASE("filtration invariants") {
  const TimeGrid grid({0.0, 1.0});
  CHECK_THROWS_AS(Filtration(grid, {{{0}, {1}}, {{0}, {1}}}, 2), StructuralError);  // t0 not trivial
  CHECK_THROWS_AS(Filtration(grid, {{{0, 1}}}, 2), StructuralError);  // one per grid time
  const TimeGrid grid3({0.0, 1.0, 2.0});
  CHECK_THROWS_AS(Filtration(grid3, {{{0, 1, 2, 3}}, {{0, 2}, {1, 3}}, {{0, 1}, {2, 3}}}, 4),
                  StructuralError);  // must refine
  CHECK_NOTHROW(Filtration(grid3, {{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0}, {1}, {2, 3}}}, 4));
}

TEST_CASE("adaptedness") {
  const TimeGrid grid({0.0, 1.0});
  const Filtration filt(grid, {{{0, 1}}, {{0}, {1}}}, 2);
  MatD constant = MatD::Ones(2, 2);
  CHECK(is_adapted<double>(constant, filt).adapted);

  const Filtration coarse(grid, {{{0, 1}}, {{0, 1}}}, 2);
  MatD revealing(2, 2);
  revealing << 1, 2, 1, 0.5;
  const auto rep = is_adapted<double>(revealing, coarse);
  CHECK_FALSE(rep.adapted);
  CHECK(rep.time == 1);
  CHECK(rep.cell == 0);

  // any process is adapted to its own natural filtration
  auto rng = harness::make_rng(4);
  for (int rep_i = 0; rep_i < 20; ++rep_i) {
    const auto grid3 = harness::grid_of(3);
    std::uniform_int_distribution<int> v(0, 3);
    MatD X(3, 3);
    X.col(0).setOnes();
    for (Eigen::Index a = 0; a < 3; ++a)
      for (Eigen::Index t = 1; t < 3; ++t) X(a, t) = v(rng);
    const Filtration nat = oracle::natural_filtration({X}, grid3);
    CHECK(is_adapted<double>(X, nat).adapted);
  }
}
