#include "gsd/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "gsd/lp.hpp"
#include "gsd/oracle.hpp"

namespace gsd {

bool MarketSpec::is_sp(int j) const {
  return std::find(strictly_positive.begin(), strictly_positive.end(), j) !=
         strictly_positive.end();
}

MarketValidation validate_market(const MarketSpec& m) {
  MarketValidation rep;
  auto fail = [&rep](std::string msg) {
    rep.ok = false;
    rep.issues.push_back(std::move(msg));
  };

  if (m.generators.empty()) fail("market: no generators");
  if (m.names.size() != m.generators.size()) fail("market: name/generator count mismatch");
  for (std::size_t j = 0; j < m.generators.size(); ++j) {
    const MatD& X = m.generators[j];
    if (X.rows() != m.space.size() || static_cast<std::size_t>(X.cols()) != m.n_times()) {
      fail("market: generator '" + m.names[j] + "' has wrong shape");
      continue;
    }
    for (Eigen::Index a = 0; a < X.rows(); ++a)
      if (std::abs(X(a, 0) - 1.0) > 1e-12)
        fail("market: generator '" + m.names[j] + "' violates X0 = 1 on atom " +
             m.space.atoms[a]);
    if ((X < 0.0).any() || !X.isFinite().all())
      fail("market: generator '" + m.names[j] + "' is not nonnegative finite");
  }
  if (m.strictly_positive.empty())
    fail("market: no strictly positive generator declared");
  for (int j : m.strictly_positive) {
    if (j < 0 || j >= static_cast<int>(m.generators.size())) {
      fail("market: strictly_positive index out of range");
      continue;
    }
    if ((m.generators[j] <= 0.0).any())
      fail("market: generator '" + m.names[j] + "' declared strictly positive but has a zero");
  }
  return rep;
}

MatD strategy_wealth(const MarketSpec& m, const PureStrategy& strat) {
  const std::size_t K = m.n_times();
  const Eigen::Index n_atoms = m.space.size();
  if (strat.choices.size() + 2 != K && !(K == 2 && strat.choices.empty()))
    throw StructuralError("strategy: one choice level per interior grid time required");

  std::vector<int> cur(static_cast<std::size_t>(n_atoms), strat.base);
  VecD scale = VecD::Ones(n_atoms);
  MatD W(n_atoms, static_cast<Eigen::Index>(K));
  W.col(0) = m.generators[strat.base].col(0);

  for (std::size_t k = 1; k < K; ++k) {
    for (Eigen::Index a = 0; a < n_atoms; ++a)
      W(a, static_cast<Eigen::Index>(k)) =
          scale[a] * m.generators[cur[static_cast<std::size_t>(a)]](a, static_cast<Eigen::Index>(k));
    if (k + 1 >= K) break;
    const Partition& part = m.filt.partitions[k];
    const auto& level = strat.choices[k - 1];
    if (level.size() != part.size())
      throw StructuralError("strategy: choice/cell count mismatch at grid time " +
                            std::to_string(k));
    for (std::size_t c = 0; c < part.size(); ++c) {
      const int g = level[c];
      if (g == kHold) continue;
      if (!m.is_sp(g))
        throw StructuralError("strategy: can only switch into a strictly positive generator");
      for (Eigen::Index a : part[c]) {
        scale[a] = W(a, static_cast<Eigen::Index>(k)) / m.generators[g](a, static_cast<Eigen::Index>(k));
        cur[static_cast<std::size_t>(a)] = g;
      }
    }
  }
  return W;
}

MatD switch_compose(const MatD& X, const MatD& Xp, std::size_t tau,
                    const std::vector<Eigen::Index>& A, const Filtration& filt) {
  if (X.rows() != Xp.rows() || X.cols() != Xp.cols())
    throw StructuralError("switch_compose: shape mismatch");
  if (tau >= filt.grid.size()) throw StructuralError("switch_compose: tau off the grid");
  if ((Xp <= 0.0).any()) throw StructuralError("switch_compose: target must be strictly positive");

  std::vector<char> in_A(static_cast<std::size_t>(X.rows()), 0);
  for (Eigen::Index a : A) {
    if (a < 0 || a >= X.rows()) throw StructuralError("switch_compose: atom out of range");
    in_A[static_cast<std::size_t>(a)] = 1;
  }
  for (const auto& cell : filt.partitions[tau]) {
    const char first = in_A[static_cast<std::size_t>(cell.front())];
    for (Eigen::Index a : cell)
      if (in_A[static_cast<std::size_t>(a)] != first)
        throw StructuralError("switch_compose: A is not measurable at tau");
  }

  MatD out = X;
  const Eigen::Index tau_i = static_cast<Eigen::Index>(tau);
  for (Eigen::Index a = 0; a < X.rows(); ++a) {
    if (!in_A[static_cast<std::size_t>(a)]) continue;
    const double factor = X(a, tau_i) / Xp(a, tau_i);
    for (Eigen::Index t = tau_i; t < X.cols(); ++t) out(a, t) = factor * Xp(a, t);
  }
  return out;
}

namespace {

// One deflator certificate, written in the log increments y of Y: with
// Y_t = exp(sum_{u<t} y(atom, u)), the conditional certificate
// E[1_A (W_t/W_s) Y_t/Y_s] <= P[A] becomes the convex exponential-sum
// constraint sum_k coef_k exp(sum_{u=s}^{t-1} y(atom_k, u)) <= bound.
struct CertConstraint {
  std::vector<Eigen::Index> atoms;
  std::vector<double> coef;  // p_w * W_t(w) / W_s(w), over atoms with W_s > 0
  std::size_t s = 0, t = 0;
  double bound = 0;  // P[A and W_s > 0]; absorbed atoms contribute 1 exactly
};

std::vector<CertConstraint> deflator_constraints(const MarketSpec& m,
                                                 const std::vector<MatD>& wealths) {
  const std::size_t K = m.n_times();
  std::vector<CertConstraint> out;
  for (const auto& W : wealths) {
    for (std::size_t s = 0; s + 1 < K; ++s) {
      for (std::size_t t = s + 1; t < K; ++t) {
        for (const auto& cell : m.filt.partitions[s]) {
          CertConstraint c;
          c.s = s;
          c.t = t;
          for (Eigen::Index a : cell) {
            const double ws = W(a, static_cast<Eigen::Index>(s));
            const double wt = W(a, static_cast<Eigen::Index>(t));
            if (ws <= 0.0) continue;  // absorbed (or resurrecting, flagged later)
            c.bound += m.space.probs[a];
            if (wt <= 0.0) continue;  // vanished wealth never strains the bound
            c.atoms.push_back(a);
            c.coef.push_back(m.space.probs[a] * wt / ws);
          }
          if (c.atoms.empty()) continue;
          // duplicates across strategies are kept: the constraint list is then
          // structurally identical under generator permutation and change of
          // numeraire, which keeps the construction exactly equivariant
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

// The deflator as a convex program: maximize E[log Y_T] over all strictly
// positive Y with Y_0 = 1 satisfying every certificate constraint above.
// In the one-period case the optimum is exactly the reciprocal of the
// expected-log numeraire of the terminal slice; in general it extends that
// construction to coarse information, where the per-time slice numeraires
// need not be time-consistent. Solved by a log-barrier interior-point Newton
// iteration in the log increments; iterates stay strictly feasible, so the
// returned Y always satisfies the certificates it was built from.
MatD solve_deflator_Y(const MarketSpec& m, const std::vector<MatD>& wealths, double tol) {
  const std::size_t K = m.n_times();
  const Eigen::Index n_atoms = m.space.size();
  const Eigen::Index dim = n_atoms * static_cast<Eigen::Index>(K - 1);
  const auto cons = deflator_constraints(m, wealths);
  auto index = [&](Eigen::Index a, std::size_t u) {
    return a * static_cast<Eigen::Index>(K - 1) + static_cast<Eigen::Index>(u);
  };

  // objective: maximize sum_a p_a sum_u y(a, u) = E[log Y_T]
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index a = 0; a < n_atoms; ++a)
    for (std::size_t u = 0; u + 1 < K; ++u) obj[index(a, u)] = m.space.probs[a];

  // strictly feasible start: a uniform negative increment
  double y0 = -0.1;
  for (const auto& c : cons) {
    double total = 0;
    for (double v : c.coef) total += v;
    const double margin = std::log(c.bound / (2.0 * total));
    if (margin < 0.0) y0 = std::min(y0, margin / static_cast<double>(c.t - c.s));
  }
  Eigen::VectorXd y = Eigen::VectorXd::Constant(dim, y0);

  auto eval_one = [&](const CertConstraint& c, const Eigen::VectorXd& at,
                      std::vector<double>& terms) {
    double g = 0;
    terms.resize(c.atoms.size());
    for (std::size_t k = 0; k < c.atoms.size(); ++k) {
      double z = 0;
      for (std::size_t u = c.s; u < c.t; ++u) z += at[index(c.atoms[k], u)];
      terms[k] = c.coef[k] * std::exp(z);
      g += terms[k];
    }
    return g;
  };
  auto feasible = [&](const Eigen::VectorXd& at) {
    std::vector<double> terms;
    for (const auto& c : cons)
      if (eval_one(c, at, terms) >= c.bound) return false;
    return true;
  };
  if (!feasible(y)) throw NonconvergenceError("construct_deflator: no feasible starting point", 0.0);

  const double gap_target = std::min(tol, 1e-10) * 1e-2;
  double t_bar = 1.0;
  std::vector<double> terms;
  Eigen::VectorXd grad_g(dim);
  int total_newton = 0;
  while (true) {
    for (int it = 0; it < 60; ++it) {
      if (++total_newton > 4000)
        throw NonconvergenceError("construct_deflator: interior-point iteration limit", 0.0);
      Eigen::VectorXd grad = -t_bar * obj;
      Eigen::MatrixXd hess = Eigen::MatrixXd::Identity(dim, dim) * 1e-12;
      double psi = -t_bar * obj.dot(y);
      for (const auto& c : cons) {
        const double g = eval_one(c, y, terms);
        const double slack = c.bound - g;
        psi -= std::log(slack);
        grad_g.setZero();
        for (std::size_t k = 0; k < c.atoms.size(); ++k)
          for (std::size_t u = c.s; u < c.t; ++u) grad_g[index(c.atoms[k], u)] += terms[k];
        grad += grad_g / slack;
        hess += (grad_g * grad_g.transpose()) / (slack * slack);
        for (std::size_t k = 0; k < c.atoms.size(); ++k)
          for (std::size_t u = c.s; u < c.t; ++u)
            for (std::size_t v = c.s; v < c.t; ++v)
              hess(index(c.atoms[k], u), index(c.atoms[k], v)) += terms[k] / slack;
      }
      const Eigen::VectorXd step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      if (!(decrement > 1e-18)) break;
      double alpha = 1.0;
      for (int ls = 0; ls < 80; ++ls, alpha *= 0.5) {
        const Eigen::VectorXd cand = y + alpha * step;
        if (!feasible(cand)) continue;
        double psi_cand = -t_bar * obj.dot(cand);
        for (const auto& c : cons) psi_cand -= std::log(c.bound - eval_one(c, cand, terms));
        if (psi_cand <= psi - 1e-4 * alpha * decrement) {
          y = cand;
          break;
        }
      }
      if (decrement < 1e-14) break;
    }
    if (static_cast<double>(cons.size()) / t_bar < gap_target) break;
    t_bar *= 20.0;
  }

  // Polish. The barrier point carries two kinds of residual error: an
  // O(1 / sqrt(t_bar)) drift toward weakly active constraints (zero
  // multiplier), and noise along directions where the optimum is badly
  // determined (the objective only pins the sum of the log increments, so
  // intermediate-time increments can be underdetermined, either exactly or
  // up to curvature). Two corrections fix both. First, a Newton solve of the
  // KKT system maximizes the objective restricted to the near-active face,
  // giving an essentially exact optimal point up to the underdetermined
  // directions. Second, those directions are resolved by a canonical choice:
  // the point closest to the negated average log increment of the strictly
  // positive generators, projected onto a slightly relaxed neighborhood of
  // the optimal face. The negated reference gains under a change of
  // numeraire exactly the increments the generators lose, and the relaxed
  // neighborhood transforms exactly, so the transform identities of the
  // deflator survive and the returned point is reproducible across
  // equivalent presentations of the same instance. Extended precision keeps
  // the residual floor of the corrections below what near-dependent
  // certificates can amplify into visible error. Each correction is kept
  // only if it satisfies every (relaxed) certificate and does not lower the
  // objective; otherwise the strictly feasible barrier point stands.
  {
    using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const VecL obj_l = obj.cast<long double>();
    auto eval_one_l = [&](const CertConstraint& c, const VecL& at, std::vector<long double>& tl) {
      long double g = 0;
      tl.resize(c.atoms.size());
      for (std::size_t k = 0; k < c.atoms.size(); ++k) {
        long double z = 0;
        for (std::size_t u = c.s; u < c.t; ++u) z += at[index(c.atoms[k], u)];
        tl[k] = static_cast<long double>(c.coef[k]) * std::exp(z);
        g += tl[k];
      }
      return g;
    };
    std::vector<long double> tl;

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < cons.size(); ++i) {
      const double slack = cons[i].bound - eval_one(cons[i], y, terms);
      if (slack < 1e-4 * std::max(1.0, cons[i].bound)) active.push_back(i);
    }
    const Eigen::Index na = static_cast<Eigen::Index>(active.size());

    // equivariant reference point for the tie-break
    VecL ref = VecL::Zero(dim);
    for (int j : m.strictly_positive) {
      const MatD& G = m.generators[static_cast<std::size_t>(j)];
      for (Eigen::Index a = 0; a < n_atoms; ++a)
        for (std::size_t u = 0; u + 1 < K; ++u)
          ref[index(a, u)] += std::log(static_cast<long double>(G(a, static_cast<Eigen::Index>(u + 1))) /
                                       static_cast<long double>(G(a, static_cast<Eigen::Index>(u))));
    }
    ref /= -static_cast<long double>(m.strictly_positive.size());

    auto acceptable = [&](const VecL& yp) {
      if (static_cast<double>(obj_l.dot(yp)) < obj.dot(y) - 1e-12) return false;
      for (const auto& c : cons)
        if (static_cast<double>(eval_one_l(c, yp, tl)) > c.bound * (1.0 + 1e-10) + 1e-12)
          return false;
      return true;
    };

    // Newton on the KKT system of: maximize obj . y on the active face,
    // iterated to the extended-precision residual floor (the best iterate is
    // kept; a fixed threshold would leave a position error of residual over
    // the smallest singular value of the active Jacobian)
    auto face_newton = [&](VecL yp) -> std::optional<VecL> {
      VecL nu = VecL::Zero(na);
      MatL J(na, dim), W(dim, dim);
      VecL r_dual(dim), r_prim(na);
      auto residuals = [&](const VecL& at, const VecL& mult) {
        J.setZero();
        W = MatL::Identity(dim, dim) * 1e-16L;
        for (Eigen::Index i = 0; i < na; ++i) {
          const auto& c = cons[active[static_cast<std::size_t>(i)]];
          r_prim[i] = eval_one_l(c, at, tl) - static_cast<long double>(c.bound);
          for (std::size_t k = 0; k < c.atoms.size(); ++k)
            for (std::size_t u = c.s; u < c.t; ++u) {
              J(i, index(c.atoms[k], u)) += tl[k];
              for (std::size_t v = c.s; v < c.t; ++v)
                W(index(c.atoms[k], u), index(c.atoms[k], v)) += mult[i] * tl[k];
            }
        }
        r_dual = -obj_l + J.transpose() * mult;
      };
      VecL best = yp;
      long double best_merit = std::numeric_limits<long double>::infinity();
      for (int it = 0; it < 80; ++it) {
        residuals(yp, nu);
        const long double merit = r_dual.squaredNorm() + r_prim.squaredNorm();
        if (merit < best_merit) {
          best_merit = merit;
          best = yp;
        }
        MatL kkt = MatL::Zero(dim + na, dim + na);
        kkt.topLeftCorner(dim, dim) = W;
        kkt.topRightCorner(dim, na) = J.transpose();
        kkt.bottomLeftCorner(na, dim) = J;
        VecL rhs(dim + na);
        rhs.head(dim) = -r_dual;
        rhs.tail(na) = -r_prim;
        const VecL d = kkt.completeOrthogonalDecomposition().solve(rhs);
        // backtrack on the residual norm so curvature cannot induce a cycle
        long double alpha =
            std::min(1.0L, 0.5L / std::max(0.5L, d.head(dim).lpNorm<Eigen::Infinity>()));
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls, alpha *= 0.5L) {
          const VecL yc = yp + alpha * d.head(dim);
          const VecL nc = nu + alpha * d.tail(na);
          residuals(yc, nc);
          if (r_dual.squaredNorm() + r_prim.squaredNorm() < merit) {
            yp = yc;
            nu = nc;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      if (best_merit < 1e-24L) return best;
      return std::nullopt;
    };

    if (na > 0) {
      const auto opt = face_newton(y.cast<long double>());
      if (opt && acceptable(*opt)) {
        VecL y1 = *opt;
        // Canonical tie-break: project the reference onto a slightly relaxed
        // neighborhood of the optimal face, namely every certificate with the
        // active ones relaxed by a relative 1e-10 intersected with the
        // half-space of near-optimal objective values. The projection is
        // strongly convex, so its minimizer is unique, and it needs no rank
        // or active-set decisions that could flip under a reordering of the
        // generators. Directions along which the face is exactly flat are
        // interior to the neighborhood and resolve to the reference
        // component; directions along which the face merely curves resolve
        // to the relaxed boundary, whose position cancels the anchor's noise
        // to first order and depends on the instance data only through a
        // well-sloped crossing. Without the relaxation the optimum's position
        // is only square-root determined by the data, which a change of
        // numeraire perturbs at rounding level.
        std::vector<char> is_active(cons.size(), 0);
        for (std::size_t i : active) is_active[i] = 1;
        std::vector<long double> bl(cons.size());
        for (std::size_t i = 0; i < cons.size(); ++i)
          bl[i] = static_cast<long double>(cons[i].bound) * (is_active[i] ? 1.0L + 1e-10L : 1.0L);
        const long double v_lo = obj_l.dot(y1) - 5e-13L;
        auto margin = [&](const VecL& at) {  // minimum feasibility slack
          long double s = obj_l.dot(at) - v_lo;
          for (std::size_t i = 0; i < cons.size(); ++i)
            s = std::min(s, bl[i] - eval_one_l(cons[i], at, tl));
          return s;
        };
        VecL yp = y1;
        VecL grad_gl(dim);
        // barrier continuation toward the projection; the identity Hessian of
        // the objective makes the central-path point approach the projection
        // at rate sqrt(2 m / t), so no terminal refinement is needed
        for (long double tp = 1.0L; tp < 1e24L; tp *= 20.0L) {
          for (int it = 0; it < 40; ++it) {
            VecL grad = 2.0L * tp * (yp - ref);
            MatL H = MatL::Identity(dim, dim) * (2.0L * tp);
            for (std::size_t i = 0; i < cons.size(); ++i) {
              const auto& c = cons[i];
              const long double slack = bl[i] - eval_one_l(c, yp, tl);
              grad_gl.setZero();
              for (std::size_t k = 0; k < c.atoms.size(); ++k)
                for (std::size_t u = c.s; u < c.t; ++u) grad_gl[index(c.atoms[k], u)] += tl[k];
              grad += grad_gl / slack;
              H += (grad_gl * grad_gl.transpose()) / (slack * slack);
              for (std::size_t k = 0; k < c.atoms.size(); ++k)
                for (std::size_t u = c.s; u < c.t; ++u)
                  for (std::size_t v = c.s; v < c.t; ++v)
                    H(index(c.atoms[k], u), index(c.atoms[k], v)) += tl[k] / slack;
            }
            const long double s_obj = obj_l.dot(yp) - v_lo;
            grad -= obj_l / s_obj;
            H += (obj_l * obj_l.transpose()) / (s_obj * s_obj);
            const VecL step = H.ldlt().solve(-grad);
            if (!(step.lpNorm<Eigen::Infinity>() > 1e-16L)) break;
            long double alpha = 1.0L;
            for (int ls = 0; ls < 60; ++ls, alpha *= 0.5L)
              if (margin(yp + alpha * step) > 0.0L) break;
            if (!(margin(yp + alpha * step) > 0.0L)) break;
            yp += alpha * step;
          }
        }
        if (acceptable(yp)) y1 = yp;
        y = y1.cast<double>();
      }
    }
  }


  MatD Y = MatD::Ones(n_atoms, static_cast<Eigen::Index>(K));
  for (std::size_t u = 0; u + 1 < K; ++u)
    for (Eigen::Index a = 0; a < n_atoms; ++a)
      Y(a, static_cast<Eigen::Index>(u + 1)) =
          Y(a, static_cast<Eigen::Index>(u)) * std::exp(y[index(a, u)]);
  return Y;
}

std::vector<VecD> dedup_columns(const std::vector<MatD>& wealths, std::size_t t) {
  std::vector<VecD> cols;
  for (const auto& W : wealths) {
    VecD v = W.col(static_cast<Eigen::Index>(t));
    bool fresh = true;
    for (const auto& u : cols)
      if ((u == v).all()) {
        fresh = false;
        break;
      }
    if (fresh) cols.push_back(std::move(v));
  }
  return cols;
}

}  // namespace

ConvexSetSpec slice_set(const MarketSpec& m, std::size_t t, std::size_t max_strategies) {
  if (t >= m.n_times()) throw StructuralError("slice_set: time off the grid");
  auto strategies = oracle::enumerate_strategies(m, t, max_strategies);
  std::vector<MatD> wealths;
  wealths.reserve(strategies.size());
  for (const auto& s : strategies) wealths.push_back(strategy_wealth(m, s));

  ConvexSetSpec set;
  set.space = m.space;
  set.generators = dedup_columns(wealths, t);
  return set;
}

DeflatorReport construct_deflator(const MarketSpec& m, double tol, std::size_t max_strategies) {
  const auto valid = validate_market(m);
  if (!valid.ok) throw StructuralError("construct_deflator: " + valid.issues.front());

  const std::size_t K = m.n_times();
  const auto strategies = oracle::enumerate_strategies(m, K - 1, max_strategies);
  std::vector<MatD> wealths;
  wealths.reserve(strategies.size());
  for (const auto& s : strategies) wealths.push_back(strategy_wealth(m, s));

  DeflatorReport rep;
  rep.Y = solve_deflator_Y(m, wealths, tol);

  rep.worst_certificate = 0;
  for (std::size_t j = 0; j < strategies.size(); ++j) {
    const MatD Z = wealths[j] * rep.Y;
    const GensupReport g = check_generalized_supermartingale(Z, m.filt, m.space, tol);
    for (const auto& v : g.violations) {
      rep.violations.push_back({j, v});
      rep.worst_certificate = std::max(rep.worst_certificate, v.value);
    }
    if (!g.resurrection_events.empty()) rep.resurrecting_strategies.push_back(j);
  }
  rep.pass = rep.violations.empty() && rep.resurrecting_strategies.empty();

  rep.adapted_natural =
      is_adapted<double>(rep.Y, oracle::natural_filtration(m.generators, m.grid)).adapted;
  return rep;
}

NumeraireWealthReport numeraire_wealth(const MarketSpec& m, double tol,
                                       std::size_t max_strategies) {
  const auto valid = validate_market(m);
  if (!valid.ok) throw StructuralError("numeraire_wealth: " + valid.issues.front());

  const std::size_t K = m.n_times();
  const auto strategies = oracle::enumerate_strategies(m, K - 1, max_strategies);
  std::vector<MatD> wealths;
  wealths.reserve(strategies.size());
  for (const auto& s : strategies) wealths.push_back(strategy_wealth(m, s));

  NumeraireWealthReport rep;
  rep.xhat = 1.0 / solve_deflator_Y(m, wealths, tol);
  if ((rep.xhat <= 0.0).any())
    throw StructuralError("numeraire_wealth: mixture is not strictly positive");

  // express the terminal value as a mixture of pure-strategy terminal values
  // when possible; under coarse information the optimum may only be reachable
  // through intermediate switching into mixtures, leaving the weights zero
  const Eigen::Index n_strat = static_cast<Eigen::Index>(strategies.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m.space.size() + 1, n_strat);
  Eigen::VectorXd b(m.space.size() + 1);
  for (Eigen::Index j = 0; j < n_strat; ++j)
    A.col(j).head(m.space.size()) =
        wealths[static_cast<std::size_t>(j)].col(static_cast<Eigen::Index>(K - 1)).matrix();
  A.row(m.space.size()).setOnes();
  b.head(m.space.size()) = rep.xhat.col(static_cast<Eigen::Index>(K - 1)).matrix();
  b[m.space.size()] = 1.0;
  rep.weights = VecD::Zero(n_strat);
  if (const auto witness = lp_feasible_point(A, b, std::max(tol, 1e-8)))
    rep.weights = witness->head(n_strat).array();

  bool ok = true;
  rep.worst_certificate = 0;
  auto check = [&](const MatD& X) {
    MatD Z(m.space.size(), static_cast<Eigen::Index>(K));
    for (std::size_t t = 0; t < K; ++t)
      Z.col(static_cast<Eigen::Index>(t)) =
          X.col(static_cast<Eigen::Index>(t)) / rep.xhat.col(static_cast<Eigen::Index>(t));
    const GensupReport g = check_generalized_supermartingale(Z, m.filt, m.space, tol);
    for (const auto& v : g.violations)
      rep.worst_certificate = std::max(rep.worst_certificate, v.value);
    if (!g.pass()) ok = false;
  };
  for (const auto& X : m.generators) check(X);
  for (const auto& W : wealths) check(W);
  rep.pass = ok;
  return rep;
}

Na1Report na1_report(const MarketSpec& m, double tol, std::size_t max_strategies) {
  const auto valid = validate_market(m);
  if (!valid.ok) throw StructuralError("na1_report: " + valid.issues.front());

  const std::size_t K = m.n_times();
  const Eigen::Index n_atoms = m.space.size();

  // H(a, k): best multiplicative growth from t_k to T through strictly
  // positive holdings, per atom
  MatD H = MatD::Ones(n_atoms, static_cast<Eigen::Index>(K));
  for (std::size_t k = K - 1; k-- > 0;) {
    for (Eigen::Index a = 0; a < n_atoms; ++a) {
      double best = 0;
      for (int g : m.strictly_positive) {
        const double step = m.generators[g](a, static_cast<Eigen::Index>(k + 1)) /
                            m.generators[g](a, static_cast<Eigen::Index>(k));
        best = std::max(best, step * H(a, static_cast<Eigen::Index>(k + 1)));
      }
      H(a, static_cast<Eigen::Index>(k)) = best;
    }
  }

  Na1Report rep;
  rep.bound = VecD::Zero(n_atoms);
  for (Eigen::Index a = 0; a < n_atoms; ++a)
    for (std::size_t b = 0; b < m.generators.size(); ++b)
      for (std::size_t j = 0; j < K; ++j)
        rep.bound[a] = std::max(rep.bound[a], m.generators[b](a, static_cast<Eigen::Index>(j)) *
                                                  H(a, static_cast<Eigen::Index>(j)));

  // cross-certification through the terminal value of the deflator
  const auto strategies = oracle::enumerate_strategies(m, K - 1, max_strategies);
  std::vector<MatD> wealths;
  wealths.reserve(strategies.size());
  for (const auto& s : strategies) wealths.push_back(strategy_wealth(m, s));
  const VecD y_T = solve_deflator_Y(m, wealths, tol).col(static_cast<Eigen::Index>(K - 1));
  rep.terminal_certificates_ok = true;
  rep.markov_ok = true;
  for (const auto& W : wealths) {
    const VecD x_T = W.col(static_cast<Eigen::Index>(K - 1));
    const VecD deflated = y_T * x_T;
    if (expectation<double>(deflated, m.space) > 1.0 + tol) rep.terminal_certificates_ok = false;
    for (double ell : {1.0, 10.0, 100.0}) {
      double p_tail = 0;
      for (Eigen::Index a = 0; a < n_atoms; ++a)
        if (deflated[a] > ell) p_tail += m.space.probs[a];
      if (ell * p_tail > 1.0 + tol) rep.markov_ok = false;
    }
  }
  rep.bounded = rep.bound.isFinite().all();
  rep.na1 = rep.bounded;
  return rep;
}

MarketSpec denominate(const MarketSpec& m, int index) {
  if (!m.is_sp(index))
    throw StructuralError("denominate: numeraire generator must be strictly positive");
  MarketSpec out = m;
  for (auto& X : out.generators) X = X / m.generators[index];
  return out;
}

}  // namespace gsd
