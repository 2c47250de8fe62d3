#pragma once

#include <string>
#include <vector>

#include "gsd/convex_set.hpp"
#include "gsd/gensup.hpp"
#include "gsd/numeraire.hpp"

namespace gsd {

// Generators of a wealth-process set, interpreted as the smallest set
// containing them that is closed under convex combination and switching
// into strictly positive elements at grid times on measurable events.
struct MarketSpec {
  ProbSpace space;
  TimeGrid grid;
  Filtration filt;
  std::vector<std::string> names;
  std::vector<MatD> generators;           // one (atoms x times) process each
  std::vector<int> strictly_positive;     // indices into generators

  std::size_t n_times() const { return grid.size(); }
  bool is_sp(int j) const;
};

struct MarketValidation {
  bool ok = true;
  std::vector<std::string> issues;
};

// Structural hypotheses: X0 = 1 and nonnegativity per generator, at least one
// strictly positive generator. Convexity and switching are closure semantics,
// satisfied by construction.
MarketValidation validate_market(const MarketSpec& m);

inline constexpr int kHold = -1;

// Cellwise-measurable plan: which strictly positive generator is held over
// each grid step, or kHold to keep the current holding (only meaningful while
// still on a non-strictly-positive base).
struct PureStrategy {
  int base = 0;
  // choices[k-1][c] is the decision at time t_k on cell c of F_{t_k},
  // for k = 1 .. K-2 (the decision at t_0 is the base itself).
  std::vector<std::vector<int>> choices;
};

// Wealth process of a pure strategy (atoms x times); starts at 1.
MatD strategy_wealth(const MarketSpec& m, const PureStrategy& strat);

// The switching formula: X before tau or off A, (X_tau / Xp_tau) Xp_t on A
// from tau on. A must be a union of cells of the partition at tau and Xp
// strictly positive.
MatD switch_compose(const MatD& X, const MatD& Xp, std::size_t tau,
                    const std::vector<Eigen::Index>& A, const Filtration& filt);

// Time-t slice of the wealth-process set: the polytope spanned by the time-t
// values of all pure strategies.
ConvexSetSpec slice_set(const MarketSpec& m, std::size_t t, std::size_t max_strategies = 100000);

struct StrategyViolation {
  std::size_t strategy = 0;
  GensupViolation v;
};

struct DeflatorReport {
  MatD Y;  // strictly positive, Y_0 = 1, expected-log maximal deflator
  bool pass = false;
  std::vector<StrategyViolation> violations;
  std::vector<std::size_t> resurrecting_strategies;
  double worst_certificate = 0;  // worst violating conditional expectation (0 when none)
  bool adapted_natural = false;  // Y adapted to the generators' natural filtration
};

// Builds Y as the expected-log-largest strictly positive process satisfying
// every conditional certificate E[X_t Y_t / (X_s Y_s) | F_s] <= 1 over the
// pure strategies: in the log increments of Y each certificate is a convex
// exponential-sum constraint, solved by an interior-point iteration. In the
// one-period case the optimum is exactly the reciprocal of the terminal-slice
// numeraire; under coarse information it extends that construction, where
// the per-time slice numeraires need not be time-consistent. When the optimum
// leaves intermediate increments underdetermined, a canonical tie-break picks
// the candidate closest to the negated average log increment of the strictly
// positive generators, which commutes with generator permutations and with a
// change of numeraire. The result is then re-verified strategy by strategy.
DeflatorReport construct_deflator(const MarketSpec& m, double tol = 1e-9,
                                  std::size_t max_strategies = 100000);

struct NumeraireWealthReport {
  MatD xhat;      // strictly positive wealth process, atomwise 1 / Y
  VecD weights;   // simplex weights over the enumerated pure strategies
  bool pass = false;
  double worst_certificate = 0;
};

// The strictly positive wealth process making X / xhat a generalized
// supermartingale for every generator and pure strategy; the atomwise
// reciprocal of the constructed deflator. The weights express its terminal
// value as a mixture of pure-strategy terminal values whenever such a
// representation exists; under coarse information the optimum may only be
// reachable through intermediate switching into mixtures, in which case the
// weights are reported as all zero.
NumeraireWealthReport numeraire_wealth(const MarketSpec& m, double tol = 1e-9,
                                       std::size_t max_strategies = 100000);

struct Na1Report {
  VecD bound;         // per-atom supremum of terminal wealth over pure strategies
  bool bounded = true;  // always, on a finite grid with finitely many generators
  bool na1 = true;
  bool terminal_certificates_ok = false;  // E[Y_T X_T] <= 1 per strategy
  bool markov_ok = false;                 // l P[Y_T X_T > l] <= 1 for l in {1,10,100}
};

// Boundedness in probability decided atomwise by dynamic programming over
// one-step growth ratios, cross-certified through the deflator via the
// Markov inequality.
Na1Report na1_report(const MarketSpec& m, double tol = 1e-9,
                     std::size_t max_strategies = 100000);

// Change of numeraire: every generator divided by the strictly positive
// generator at `index`. The deflator of the result is Y times that generator.
MarketSpec denominate(const MarketSpec& m, int index);

}  // namespace gsd
