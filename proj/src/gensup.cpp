#include "gsd/gensup.hpp"

#include <algorithm>
#include <cmath>

namespace gsd {

GensupReport check_generalized_supermartingale(const MatD& Z, const Filtration& filt,
                                               const ProbSpace& space, double tol) {
  const std::size_t n_times = filt.grid.size();
  if (static_cast<std::size_t>(Z.cols()) != n_times)
    throw StructuralError("gensup check: process/grid size mismatch");
  if (Z.rows() != space.size())
    throw StructuralError("gensup check: process/space size mismatch");
  if ((Z < 0.0).any() || !Z.isFinite().all())
    throw DomainError("gensup check: process must be nonnegative and finite");

  GensupReport rep;
  for (std::size_t s = 0; s < n_times; ++s) {
    const Partition& part = filt.partitions[s];
    for (std::size_t t = s; t < n_times; ++t) {
      const VecD ratio = ratio_conventional(VecD(Z.col(static_cast<Eigen::Index>(t))),
                                            VecD(Z.col(static_cast<Eigen::Index>(s))));
      for (Eigen::Index a = 0; a < Z.rows(); ++a)
        if (std::isinf(ratio[a])) rep.resurrection_events.push_back({s, t, a});
      const VecD ce = cond_exp<double>(ratio, part, space);
      for (std::size_t c = 0; c < part.size(); ++c) {
        const double value = ce[part[c].front()];
        if (std::isinf(value) || value > 1.0 + tol) rep.violations.push_back({s, t, c, value});
      }
    }
  }
  return rep;
}

KomlosResult komlos_select(const std::vector<VecD>& seq, const ProbSpace& space, double tol) {
  if (seq.empty()) throw StructuralError("komlos_select: empty sequence");
  for (const auto& f : seq) {
    if (f.size() != space.size()) throw StructuralError("komlos_select: size mismatch");
    if (!f.isFinite().all() || (f < 0.0).any())
      throw StructuralError("komlos_select: hypothesis of the selection lemma violated "
                            "(sequence not bounded in probability)");
  }
  const std::size_t len = seq.size();

  // Pick the tail element whose Ky Fan ball of radius tol/2 captures the most
  // indices; the captured indices form the selected subsequence.
  std::size_t best_k = len - 1;
  std::size_t best_count = 0;
  double radius = tol / 2;
  std::vector<std::size_t> selected;
  for (int relax = 0; relax < 30; ++relax) {
    for (std::size_t k = len / 2; k < len; ++k) {
      std::size_t count = 0;
      for (std::size_t j = 0; j < len; ++j)
        if (ky_fan_distance<double>(seq[j], seq[k], space) <= radius) ++count;
      if (count >= best_count) {
        best_count = count;
        best_k = k;
      }
    }
    selected.clear();
    for (std::size_t j = 0; j < len; ++j)
      if (ky_fan_distance<double>(seq[j], seq[best_k], space) <= radius) selected.push_back(j);
    if (selected.size() >= 2 || len < 2) break;
    radius *= 2;  // no cluster at this scale; coarsen
  }

  KomlosResult res;
  res.limit = seq[best_k];
  // keep a monotone-nonincreasing-distance subsequence (a subsequence of a
  // valid selection is still a valid selection)
  double last = std::numeric_limits<double>::infinity();
  for (std::size_t j : selected) {
    double d = ky_fan_distance<double>(seq[j], res.limit, space);
    if (d <= last) {
      res.indices.push_back(j);
      res.distances.push_back(d);
      last = d;
    }
  }
  return res;
}

namespace {

// Quantitative form of the square-root sandwich argument:
// given a = sqrt(E[(sqrt g - sqrt h)^2]), eps = d(gh,1) and E[g],E[h] <= 1+tol,
//   d(g+h, 2) <= a^2 + 2 eps
//   d(g-h, 0) <= min_K { K a + 2(E[g]+E[h])/K^2 }
//   d(g, 1)  <= d(g+h,2) + d(g-h,0), and the same for h
//               (via min(x+y,1) <= min(x,1) + min(y,1)).
double sandwich_bound(double a, double eps, double e_g, double e_h) {
  double diff_bound = std::numeric_limits<double>::infinity();
  for (double K = 0.5; K <= 4096.0; K *= 1.25)
    diff_bound = std::min(diff_bound, K * a + 2.0 * (e_g + e_h) / (K * K));
  const double sum_bound = a * a + 2.0 * eps;
  return sum_bound + diff_bound;
}

}  // namespace

SandwichReport sandwich_check(const std::vector<VecD>& g_seq, const std::vector<VecD>& h_seq,
                              const ProbSpace& space, double tol) {
  if (g_seq.empty() || g_seq.size() != h_seq.size())
    throw StructuralError("sandwich_check: sequences must be nonempty and equal length");

  SandwichReport rep;
  const VecD ones = VecD::Ones(space.size());
  for (std::size_t n = 0; n < g_seq.size(); ++n) {
    const double eg = expectation<double>(g_seq[n], space);
    const double eh = expectation<double>(h_seq[n], space);
    if (eg > 1.0 + tol || eh > 1.0 + tol) {
      rep.hypotheses_ok = false;
      rep.hypothesis_failure = "E[g^n] or E[h^n] exceeds 1 at n=" + std::to_string(n) +
                               " (g: " + std::to_string(eg) + ", h: " + std::to_string(eh) + ")";
    }
    rep.d_g_seq.push_back(ky_fan_distance<double>(g_seq[n], ones, space));
    rep.d_h_seq.push_back(ky_fan_distance<double>(h_seq[n], ones, space));
    rep.d_product_seq.push_back(
        ky_fan_distance<double>(VecD(g_seq[n] * h_seq[n]), ones, space));
  }
  if (rep.hypotheses_ok && rep.d_product_seq.back() > tol) {
    rep.hypotheses_ok = false;
    rep.hypothesis_failure = "product sequence has not converged to 1 within the horizon";
  }
  if (!rep.hypotheses_ok) return rep;

  const std::size_t last = g_seq.size() - 1;
  const VecD& g = g_seq[last];
  const VecD& h = h_seq[last];
  rep.e_g = expectation<double>(g, space);
  rep.e_h = expectation<double>(h, space);
  rep.d_product = rep.d_product_seq.back();
  rep.e_sqrt_gh = expectation<double>((g * h).sqrt(), space);
  rep.e_sq_diff = expectation<double>((g.sqrt() - h.sqrt()).square(), space);
  rep.d_g = rep.d_g_seq.back();
  rep.d_h = rep.d_h_seq.back();
  rep.derived_tol = sandwich_bound(std::sqrt(rep.e_sq_diff), rep.d_product, rep.e_g, rep.e_h);
  rep.pass = rep.d_g <= rep.derived_tol + tol && rep.d_h <= rep.derived_tol + tol;
  return rep;
}

DiscreteLimitReport discrete_limit_check(const std::vector<VecD>& g_seq,
                                         const ProbSpace& space, double tol) {
  if (g_seq.empty()) throw StructuralError("discrete_limit_check: empty sequence");
  const std::size_t len = g_seq.size();

  DiscreteLimitReport rep;
  rep.hull_min = std::numeric_limits<double>::infinity();
  // the atomwise min of a convex hull equals the atomwise generator min
  for (const auto& g : g_seq) rep.hull_min = std::min(rep.hull_min, g.minCoeff());
  if (!(rep.hull_min > 0.0)) {
    rep.hypotheses_ok = false;
    rep.hypothesis_failure = "convex hull is not bounded away from zero";
  }

  rep.worst_pair_expectation = 0;
  for (std::size_t m = 0; m < len && rep.hypotheses_ok; ++m) {
    for (std::size_t n = m; n < len; ++n) {
      const double e = expectation<double>(
          ratio_conventional(g_seq[n], g_seq[m]), space);
      rep.worst_pair_expectation = std::max(rep.worst_pair_expectation, e);
      if (e > 1.0 + tol) {
        rep.hypotheses_ok = false;
        rep.hypothesis_failure = "E[g_n/g_m] = " + std::to_string(e) + " > 1 at (m,n) = (" +
                                 std::to_string(m) + "," + std::to_string(n) + ")";
        break;
      }
    }
  }
  if (!rep.hypotheses_ok) return rep;

  // Cauchy tail in the Ky Fan metric
  std::size_t J = len;
  for (std::size_t j = len; j-- > 0;) {
    bool ok = true;
    for (std::size_t m = j; m < len && ok; ++m)
      for (std::size_t n = m + 1; n < len && ok; ++n)
        if (ky_fan_distance<double>(g_seq[n], g_seq[m], space) > tol) ok = false;
    if (ok)
      J = j;
    else
      break;
  }
  rep.cauchy_index = J;
  rep.pass = J < len;
  rep.limit = g_seq.back();
  return rep;
}

}  // namespace gsd
