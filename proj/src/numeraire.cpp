#include "gsd/numeraire.hpp"

#include <algorithm>
#include <cmath>

namespace gsd {

namespace {

double log_objective(const VecD& probs, const VecD& f) {
  double acc = 0;
  for (Eigen::Index a = 0; a < f.size(); ++a) {
    if (f[a] <= 0.0) return -std::numeric_limits<double>::infinity();
    acc += probs[a] * std::log(f[a]);
  }
  return acc;
}

VecD certificate_values(const Eigen::MatrixXd& G, const VecD& probs, const VecD& f) {
  VecD c(G.cols());
  for (Eigen::Index j = 0; j < G.cols(); ++j) {
    double acc = 0;
    for (Eigen::Index a = 0; a < G.rows(); ++a) acc += probs[a] * G(a, j) / f[a];
    c[j] = acc;
  }
  return c;
}

// Active-set Newton on the simplex face spanned by `support`. Returns the
// polished weights (zeros off support) or nullopt when no progress was made.
std::optional<VecD> newton_polish(const Eigen::MatrixXd& G, const VecD& probs,
                                  std::vector<Eigen::Index> support, VecD lam) {
  const Eigen::Index n_gen = G.cols();
  for (int round = 0; round < 60; ++round) {
    const Eigen::Index k = static_cast<Eigen::Index>(support.size());
    VecD mu(k);
    for (Eigen::Index i = 0; i < k; ++i) mu[i] = lam[support[i]];
    double total = mu.sum();
    if (total <= 0) return std::nullopt;
    mu /= total;

    Eigen::MatrixXd Gs(G.rows(), k);
    for (Eigen::Index i = 0; i < k; ++i) Gs.col(i) = G.col(support[i]);
    VecD f = (Gs * mu.matrix()).array();
    double f0 = log_objective(probs, f);
    if (!std::isfinite(f0)) return std::nullopt;

    if (k == 1) {
      lam.setZero();
      lam[support[0]] = 1.0;
      return lam;
    }

    VecD c = certificate_values(Gs, probs, f);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < G.rows(); ++a) {
      double w = probs[a] / (f[a] * f[a]);
      H.noalias() -= w * (Gs.row(a).transpose() * Gs.row(a));
    }
    // reduced coordinates: eliminate the last support weight
    const Eigen::Index r = k - 1;
    Eigen::VectorXd grad(r);
    Eigen::MatrixXd Hr(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      grad[i] = c[i] - c[r];
      for (Eigen::Index j = 0; j < r; ++j)
        Hr(i, j) = H(i, j) - H(i, r) - H(r, j) + H(r, r);
    }
    if (grad.lpNorm<Eigen::Infinity>() < 1e-16) break;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(-Hr);
    if (ldlt.info() != Eigen::Success) return std::nullopt;
    Eigen::VectorXd dx = ldlt.solve(grad);
    if (!dx.allFinite()) return std::nullopt;

    // largest step keeping the face feasible
    double t_max = 2.0;
    for (Eigen::Index i = 0; i < r; ++i)
      if (dx[i] < 0) t_max = std::min(t_max, -mu[i] / dx[i]);
    double d_last = -dx.sum();
    if (d_last < 0) t_max = std::min(t_max, -mu[r] / d_last);

    double t = std::min(1.0, t_max);
    bool accepted = false;
    for (int bt = 0; bt < 40 && t > 0; ++bt, t *= 0.5) {
      VecD mu_t = mu;
      for (Eigen::Index i = 0; i < r; ++i) mu_t[i] = std::max(0.0, mu[i] + t * dx[i]);
      mu_t[r] = std::max(0.0, 1.0 - mu_t.head(r).sum());
      VecD f_t = (Gs * mu_t.matrix()).array();
      if (log_objective(probs, f_t) >= f0 - 1e-15) {
        mu = mu_t;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    lam.setZero();
    std::vector<Eigen::Index> next;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (mu[i] > 0) {
        lam[support[i]] = mu[i];
        next.push_back(support[i]);
      }
    }
    if (next.empty()) return std::nullopt;
    support = std::move(next);
  }

  VecD out = VecD::Zero(n_gen);
  double total = 0;
  for (Eigen::Index s : support) total += lam[s];
  if (total <= 0) return std::nullopt;
  for (Eigen::Index s : support) out[s] = lam[s] / total;
  return out;
}

}  // namespace

NumeraireResult solve_numeraire(const ConvexSetSpec& set, double tol, int max_iters) {
  set.validate();
  for (const auto& r : set.rays)
    if ((r > 0.0).any())
      throw StructuralError("solve_numeraire: set has a nonzero ray (unbounded); use afk_witness");
  if (!set.meets_strictly_positive())
    throw DomainError("numeraire nonexistent: C does not meet the strictly positive cone");

  const Eigen::Index n_atoms = set.space.size();
  const Eigen::Index n_gen = static_cast<Eigen::Index>(set.generators.size());
  Eigen::MatrixXd G(n_atoms, n_gen);
  for (Eigen::Index j = 0; j < n_gen; ++j) G.col(j) = set.generators[j].matrix();
  const VecD& probs = set.space.probs;

  VecD lam = VecD::Constant(n_gen, 1.0 / static_cast<double>(n_gen));
  double worst = std::numeric_limits<double>::infinity();
  int iterations = 0;

  auto finish = [&](const VecD& weights) {
    NumeraireResult res;
    res.weights = weights;
    res.fhat = (G * weights.matrix()).array();
    res.certificate = certificate_values(G, probs, res.fhat);
    res.log_value = log_objective(probs, res.fhat);
    res.iterations = iterations;
    return res;
  };

  for (int iter = 0; iter < max_iters; ++iter) {
    ++iterations;
    VecD f = (G * lam.matrix()).array();
    VecD c = certificate_values(G, probs, f);
    worst = c.maxCoeff() - 1.0;
    if (worst <= tol) return finish(lam);

    if (iter % 8 == 7 || worst < 1e-6) {
      std::vector<Eigen::Index> support;
      for (Eigen::Index j = 0; j < n_gen; ++j)
        if (lam[j] > 1e-14 || c[j] > 1.0 - 1e-7) support.push_back(j);
      if (auto polished = newton_polish(G, probs, support, lam)) {
        VecD fp = (G * polished->matrix()).array();
        VecD cp = certificate_values(G, probs, fp);
        if (cp.maxCoeff() - 1.0 <= tol) return finish(*polished);
        if (log_objective(probs, fp) > log_objective(probs, f) && (*polished > 0.0).all())
          lam = *polished;
      }
    }

    // multiplicative ascent: weights scale with their certificate values,
    // which already sum to one under lam
    lam *= c;
    lam /= lam.sum();
  }

  throw NonconvergenceError("solve_numeraire: no certificate after max_iters", worst);
}

CertificateReport verify_certificate(const VecD& fhat, const ConvexSetSpec& set, double tol) {
  set.validate();
  if (fhat.size() != set.space.size()) throw StructuralError("verify_certificate: size mismatch");
  if ((fhat <= 0.0).any() || !fhat.isFinite().all())
    throw DomainError("verify_certificate: fhat must be strictly positive and finite");

  CertificateReport rep;
  rep.values.resize(static_cast<Eigen::Index>(set.generators.size()));
  for (std::size_t j = 0; j < set.generators.size(); ++j) {
    rep.values[static_cast<Eigen::Index>(j)] =
        expectation<double>(set.generators[j] / fhat, set.space);
  }
  rep.values.maxCoeff(&rep.worst);
  rep.pass = rep.values.maxCoeff() <= 1.0 + tol;
  return rep;
}

AfkReport afk_witness(const ConvexSetSpec& set) {
  set.validate();
  AfkReport rep;
  rep.atomwise_sup = VecD::Zero(set.space.size());
  for (const auto& g : set.generators) rep.atomwise_sup = rep.atomwise_sup.max(g);
  for (const auto& r : set.rays) {
    if ((r > 0.0).any()) {
      // scaling construction: g + (1/x) r stays in the set for every x > 0,
      // so x (g + (1/x) r) >= r atomwise
      rep.witness = r;
      return rep;
    }
  }
  return rep;
}

NestedConvergenceReport nested_numeraire_convergence(const std::vector<ConvexSetSpec>& sets,
                                                     NestDirection direction,
                                                     const ConvexSetSpec& limit_set, double tol,
                                                     const std::optional<VecD>& known_limit) {
  if (sets.empty()) throw StructuralError("nested convergence: empty family");
  for (std::size_t n = 0; n + 1 < sets.size(); ++n) {
    const bool ok = direction == NestDirection::Increasing
                        ? contains_set(sets[n + 1], sets[n])
                        : contains_set(sets[n], sets[n + 1]);
    if (!ok)
      throw StructuralError("nested convergence: family is not nested at index " +
                            std::to_string(n));
  }

  NestedConvergenceReport rep;
  limit_set.validate();
  rep.hypothesis_ok = limit_set.meets_strictly_positive();

  if (rep.hypothesis_ok) {
    rep.limit_numeraire = solve_numeraire(limit_set, tol).fhat;
  } else {
    // formal numeraire: solve on the atoms the limit set can reach, zero off
    std::vector<Eigen::Index> live;
    for (Eigen::Index a = 0; a < limit_set.space.size(); ++a)
      for (const auto& g : limit_set.generators)
        if (g[a] > 0.0) {
          live.push_back(a);
          break;
        }
    rep.limit_numeraire = VecD::Zero(limit_set.space.size());
    if (!live.empty()) {
      ConvexSetSpec restricted;
      double mass = 0;
      restricted.space.probs.resize(static_cast<Eigen::Index>(live.size()));
      for (std::size_t i = 0; i < live.size(); ++i) {
        restricted.space.atoms.push_back(limit_set.space.atoms[live[i]]);
        mass += limit_set.space.probs[live[i]];
      }
      for (std::size_t i = 0; i < live.size(); ++i)
        restricted.space.probs[static_cast<Eigen::Index>(i)] =
            limit_set.space.probs[live[i]] / mass;
      for (const auto& g : limit_set.generators) {
        VecD sub(static_cast<Eigen::Index>(live.size()));
        for (std::size_t i = 0; i < live.size(); ++i)
          sub[static_cast<Eigen::Index>(i)] = g[live[i]];
        restricted.generators.push_back(sub);
      }
      restricted.solid = limit_set.solid;
      VecD sub_fhat = solve_numeraire(restricted, tol).fhat;
      for (std::size_t i = 0; i < live.size(); ++i)
        rep.limit_numeraire[live[i]] = sub_fhat[static_cast<Eigen::Index>(i)];
    }
  }

  VecD last_fhat;
  for (const auto& set : sets) {
    last_fhat = solve_numeraire(set, tol).fhat;
    rep.distances.push_back(
        ky_fan_distance<double>(last_fhat, rep.limit_numeraire, limit_set.space));
  }

  rep.achieved_limit = known_limit.value_or(last_fhat);
  rep.achieved_vs_limit =
      ky_fan_distance<double>(rep.achieved_limit, rep.limit_numeraire, limit_set.space);

  std::size_t settled = rep.distances.size();
  for (std::size_t n = rep.distances.size(); n-- > 0;) {
    if (rep.distances[n] <= tol)
      settled = n;
    else
      break;
  }
  rep.settled_index = settled;
  rep.pass = rep.hypothesis_ok && settled < rep.distances.size();
  return rep;
}

}  // namespace gsd
