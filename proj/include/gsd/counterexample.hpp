#pragma once

#include "gsd/convex_set.hpp"
#include "gsd/numeraire.hpp"

namespace gsd {

// Exact interval discretization of (0,1] under Lebesgue measure with
// breakpoints {1/3} and {k/(k+1) : k <= N}, carrying the nonincreasing
// family whose numeraires converge to a limit outside the limit set's
// strictly positive cone.
struct CounterexampleInstance {
  int n = 0;
  ProbSpaceQ space;        // one atom per interval, prob = exact length
  VecQ fhat;               // 1/2 on (0,1/3], 1/n on (1/3, n/(n+1)], 1 after
  VecQ g;                  // 1 on (0,1/3], 1/(5n) on (1/3, 1]
  Rational golden;         // E[g/fhat], exact
  VecQ analytic_limit;     // pointwise limit of the fhat sequence: (1/2) 1_(0,1/3]
  VecQ limit_generator;    // 1_(0,1/3], spanning the intersection set
  ConvexSetSpec set;       // solid hull of the segment between fhat and g (double)
};

// Requires 1 <= n <= N.
CounterexampleInstance counterexample_instance(int n, int N);

// Closed form for E[g^n / fhat^n], exact:
// 2/3 + (1/5)(n/(n+1) - 1/3) + 1/(5 n (n+1)).
Rational counterexample_golden_formula(int n);

// The nonincreasing family for n = 1..n_max on a common space (N = n_max),
// plus the intersection limit set (solid hull of 1_(0,1/3]).
struct CounterexampleFamily {
  std::vector<CounterexampleInstance> instances;
  ConvexSetSpec limit_set;
  VecD analytic_limit;  // in double, on the common space
};

CounterexampleFamily counterexample_family(int n_max);

}  // namespace gsd
