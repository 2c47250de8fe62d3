#pragma once

#include <vector>

#include "gsd/prob.hpp"

namespace gsd {

// Generator polytope in L0+, optionally with conic ray directions and a
// solid-hull flag (include every h dominated by some element).
struct ConvexSetSpec {
  ProbSpace space;
  std::vector<VecD> generators;
  std::vector<VecD> rays;
  bool solid = false;

  void validate() const;

  // True iff some mixture of the generators is strictly positive, which on a
  // finite space reduces to: every atom carries a positive generator value.
  bool meets_strictly_positive() const;
};

// Membership h in C, decided by linear feasibility.
bool contains(const ConvexSetSpec& set, const VecD& h, double tol = 1e-9);

// Sufficient containment check: every generator (and ray) of `small` is a
// member of `big`. Solid hulls only compare against solid (or ray-free exact)
// supersets.
bool contains_set(const ConvexSetSpec& big, const ConvexSetSpec& small, double tol = 1e-9);

}  // namespace gsd
