#pragma once

#include <optional>
#include <vector>

#include "gsd/convex_set.hpp"

namespace gsd {

struct NumeraireResult {
  VecD fhat;              // strictly positive optimizer
  VecD weights;           // simplex weights over the generators
  VecD certificate;       // E[g_i / fhat] per generator
  double log_value = 0;   // E[log fhat]
  int iterations = 0;
};

// Expected-log maximizer over the generator polytope. The returned mixture
// satisfies the first-order certificate E[g_i/fhat] <= 1 + tol for every
// generator, which extends to the whole polytope (and its solid hull) by
// convexity. Throws NonconvergenceError when max_iters runs out.
NumeraireResult solve_numeraire(const ConvexSetSpec& set, double tol = 1e-10,
                                int max_iters = 10000);

struct CertificateReport {
  bool pass = false;
  VecD values;       // E[g_i / fhat]
  int worst = 0;     // index of the maximizing generator
};

CertificateReport verify_certificate(const VecD& fhat, const ConvexSetSpec& set,
                                     double tol = 1e-10);

struct AfkReport {
  std::optional<VecD> witness;  // arbitrage-of-the-first-kind witness, if any
  VecD atomwise_sup;            // per-atom supremum over the generators
};

// A nonzero ray yields a first-kind arbitrage witness; otherwise the
// generator polytope is atomwise bounded, certifying boundedness in
// probability on a finite space.
AfkReport afk_witness(const ConvexSetSpec& set);

enum class NestDirection { Increasing, Decreasing };

struct NestedConvergenceReport {
  bool hypothesis_ok = true;   // limit set meets L0++
  bool pass = false;           // distances eventually below tol
  std::vector<double> distances;  // d(fhat_n, limit numeraire) in Ky Fan metric
  VecD limit_numeraire;        // formal numeraire of the limit set
  VecD achieved_limit;         // supplied known limit, else the last fhat_n
  double achieved_vs_limit = 0.0;
  std::size_t settled_index = 0;  // first n with all later distances <= tol
};

// Computes fhat_n for each set and compares against the limit-set numeraire.
// When the limit set misses L0++ the report flags the violated hypothesis and
// instead measures the achieved limit against the formal (support-restricted)
// numeraire of the limit set.
NestedConvergenceReport nested_numeraire_convergence(
    const std::vector<ConvexSetSpec>& sets, NestDirection direction,
    const ConvexSetSpec& limit_set, double tol,
    const std::optional<VecD>& known_limit = std::nullopt);

}  // namespace gsd
