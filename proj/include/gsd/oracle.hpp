#pragma once

#include "gsd/market.hpp"

namespace gsd {
// Intentionally naive ground-truth implementations. No code shared with the
// solver paths they check; disagreement beyond tolerance is a test failure.
namespace oracle {

struct GridNumeraireResult {
  VecD fhat;
  VecD weights;
  double log_value = 0;
};

// Exhaustive simplex grid search (step 1/resolution) maximizing E[log].
// Refuses more than three generators.
GridNumeraireResult grid_numeraire(const ConvexSetSpec& set, int resolution);

// Complete enumeration of pure strategies with choices up to (excluding)
// grid time `upto`; `upto` = n_times - 1 enumerates the full horizon.
std::vector<PureStrategy> enumerate_strategies(const MarketSpec& m, std::size_t upto,
                                               std::size_t cap = 100000);

// Coarsest refining partition sequence making every input process adapted
// (cells are joint level sets of all slices up to each time).
Filtration natural_filtration(const std::vector<MatD>& processes, const TimeGrid& grid);

// Classical cellwise supermartingale test E[Z_t | F_s] <= Z_s for adapted
// strictly positive processes; independent of the ratio-based checker.
bool classical_supermartingale_check(const MatD& Z, const Filtration& filt,
                                     const ProbSpace& space, double tol = 1e-9);

}  // namespace oracle
}  // namespace gsd
