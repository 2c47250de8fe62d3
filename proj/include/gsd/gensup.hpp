#pragma once

#include <vector>

#include "gsd/prob.hpp"

namespace gsd {

struct GensupViolation {
  std::size_t s = 0, t = 0;  // grid indices, s <= t
  std::size_t cell = 0;      // cell index in the partition at s
  double value = 0;          // conditional expectation of the ratio
};

struct ResurrectionEvent {
  std::size_t s = 0, t = 0;
  Eigen::Index atom = 0;  // Z_s = 0 < Z_t there
};

struct GensupReport {
  std::vector<GensupViolation> violations;
  std::vector<ResurrectionEvent> resurrection_events;
  bool pass() const { return violations.empty() && resurrection_events.empty(); }
};

// E[Z_t/Z_s | F_s] <= 1 + tol for every grid pair s <= t and every cell,
// with 0/0 = 1 and positive/0 = infinity; an infinite ratio on any atom of a
// cell is an automatic violation of that cell.
GensupReport check_generalized_supermartingale(const MatD& Z, const Filtration& filt,
                                               const ProbSpace& space, double tol = 1e-9);

struct KomlosResult {
  VecD limit;                    // a tail element of the selected subsequence
  std::vector<std::size_t> indices;  // selected k_1 < k_2 < ..., with k_n >= n
  std::vector<double> distances;     // d(f^{k_n}, limit), monotone nonincreasing
};

// Convex-combination selection on a finite space: per-atom subsequence
// extraction (each selected element is a tail element, hence trivially a
// convex combination of the tail). The selected distances are filtered to be
// monotone nonincreasing.
KomlosResult komlos_select(const std::vector<VecD>& seq, const ProbSpace& space,
                           double tol = 1e-3);

struct SandwichReport {
  bool hypotheses_ok = true;
  std::string hypothesis_failure;
  bool pass = false;
  // terminal-index diagnostics, quantities from the square-root argument
  double e_g = 0, e_h = 0;         // E[g], E[h]
  double d_product = 0;            // d(g h, 1)
  double e_sqrt_gh = 0;            // E[sqrt(g h)]
  double e_sq_diff = 0;            // E[(sqrt g - sqrt h)^2]
  double d_g = 0, d_h = 0;         // d(g,1), d(h,1)
  double derived_tol = 0;          // quantitative bound implied by the hypotheses
  std::vector<double> d_g_seq, d_h_seq, d_product_seq;
};

// From E[g^n] <= 1, E[h^n] <= 1 and plim g^n h^n = 1, both sequences tend to
// 1 in probability; checked quantitatively at the end of the horizon.
SandwichReport sandwich_check(const std::vector<VecD>& g_seq, const std::vector<VecD>& h_seq,
                              const ProbSpace& space, double tol);

struct DiscreteLimitReport {
  bool hypotheses_ok = true;
  std::string hypothesis_failure;
  bool pass = false;
  double worst_pair_expectation = 0;  // max over m <= n of E[g_n/g_m]
  double hull_min = 0;                // atomwise min over the sequence
  std::size_t cauchy_index = 0;       // first J with d(g_n,g_m) <= tol beyond J
  VecD limit;                         // empirical limit (last element)
};

// Discrete-time generalized supermartingale convergence: pairwise expectation
// bounds plus a hull bounded away from zero force a Cauchy tail in the Ky Fan
// metric.
DiscreteLimitReport discrete_limit_check(const std::vector<VecD>& g_seq,
                                         const ProbSpace& space, double tol);

}  // namespace gsd
