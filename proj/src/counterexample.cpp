#include "gsd/counterexample.hpp"

#include <sstream>

namespace gsd {

namespace {

std::string interval_label(const Rational& lo, const Rational& hi) {
  std::ostringstream os;
  os << "(" << lo << "," << hi << "]";
  return os.str();
}

// breakpoints 0 < 1/3 < 1/2 < 2/3 < ... < N/(N+1) < 1
std::vector<Rational> breakpoints(int N) {
  std::vector<Rational> b;
  b.emplace_back(0);
  b.emplace_back(Rational(1, 3));
  for (int k = 1; k <= N; ++k) b.emplace_back(Rational(k, k + 1));
  b.emplace_back(1);
  return b;
}

}  // namespace

Rational counterexample_golden_formula(int n) {
  return Rational(2, 3) + Rational(1, 5) * (Rational(n, n + 1) - Rational(1, 3)) +
         Rational(1, 5 * static_cast<long long>(n) * (n + 1));
}

CounterexampleInstance counterexample_instance(int n, int N) {
  if (n < 1 || N < 1 || n > N)
    throw StructuralError("counterexample: require 1 <= n <= N");

  const auto b = breakpoints(N);
  const std::size_t n_atoms = b.size() - 1;

  CounterexampleInstance inst;
  inst.n = n;
  inst.space.probs.resize(static_cast<Eigen::Index>(n_atoms));
  inst.fhat.resize(static_cast<Eigen::Index>(n_atoms));
  inst.g.resize(static_cast<Eigen::Index>(n_atoms));
  inst.analytic_limit.resize(static_cast<Eigen::Index>(n_atoms));
  inst.limit_generator.resize(static_cast<Eigen::Index>(n_atoms));

  const Rational third(1, 3);
  const Rational edge(n, n + 1);
  for (std::size_t i = 0; i < n_atoms; ++i) {
    const Rational lo = b[i], hi = b[i + 1];
    const Eigen::Index a = static_cast<Eigen::Index>(i);
    inst.space.atoms.push_back(interval_label(lo, hi));
    inst.space.probs[a] = hi - lo;
    if (hi <= third) {
      inst.fhat[a] = Rational(1, 2);
      inst.g[a] = 1;
      inst.analytic_limit[a] = Rational(1, 2);
      inst.limit_generator[a] = 1;
    } else {
      inst.fhat[a] = hi <= edge ? Rational(1, n) : Rational(1);
      inst.g[a] = Rational(1, 5 * static_cast<long long>(n));
      inst.analytic_limit[a] = 0;
      inst.limit_generator[a] = 0;
    }
  }
  inst.space.validate();

  inst.golden = expectation<Rational>(inst.g / inst.fhat, inst.space);

  inst.set.space = to_double(inst.space);
  inst.set.generators = {to_double(inst.fhat), to_double(inst.g)};
  inst.set.solid = true;
  return inst;
}

CounterexampleFamily counterexample_family(int n_max) {
  CounterexampleFamily fam;
  for (int n = 1; n <= n_max; ++n)
    fam.instances.push_back(counterexample_instance(n, n_max));

  const auto& last = fam.instances.back();
  fam.limit_set.space = last.set.space;
  fam.limit_set.generators = {to_double(last.limit_generator)};
  fam.limit_set.solid = true;
  fam.analytic_limit = to_double(last.analytic_limit);
  return fam;
}

}  // namespace gsd
