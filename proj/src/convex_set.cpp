#include "gsd/convex_set.hpp"

#include "gsd/lp.hpp"

namespace gsd {

void ConvexSetSpec::validate() const {
  if (generators.empty()) throw StructuralError("convex set: at least one generator required");
  for (const auto& g : generators) {
    if (g.size() != space.size()) throw StructuralError("convex set: generator size mismatch");
    if ((g < 0.0).any()) throw StructuralError("convex set: negative generator value");
    if (!g.isFinite().all()) throw DomainError("convex set: generator must be finite");
  }
  for (const auto& r : rays) {
    if (r.size() != space.size()) throw StructuralError("convex set: ray size mismatch");
    if ((r < 0.0).any()) throw StructuralError("convex set: negative ray value");
  }
}

bool ConvexSetSpec::meets_strictly_positive() const {
  for (Eigen::Index a = 0; a < space.size(); ++a) {
    bool positive = false;
    for (const auto& g : generators)
      if (g[a] > 0.0) positive = true;
    if (!positive) return false;
  }
  return true;
}

bool contains(const ConvexSetSpec& set, const VecD& h, double tol) {
  set.validate();
  if (h.size() != set.space.size()) throw StructuralError("contains: size mismatch");

  const Eigen::Index n_atoms = set.space.size();
  const Eigen::Index n_gen = static_cast<Eigen::Index>(set.generators.size());
  const Eigen::Index n_ray = static_cast<Eigen::Index>(set.rays.size());
  const Eigen::Index n_slack = set.solid ? n_atoms : 0;

  // columns: lambda | mu | slack ; rows: atom equations + simplex constraint
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_atoms + 1, n_gen + n_ray + n_slack);
  Eigen::VectorXd b(n_atoms + 1);
  for (Eigen::Index j = 0; j < n_gen; ++j) A.col(j).head(n_atoms) = set.generators[j].matrix();
  for (Eigen::Index j = 0; j < n_ray; ++j)
    A.col(n_gen + j).head(n_atoms) = set.rays[j].matrix();
  for (Eigen::Index a = 0; a < n_slack; ++a) A(a, n_gen + n_ray + a) = -1.0;
  b.head(n_atoms) = h.matrix();
  A.row(n_atoms).head(n_gen).setOnes();
  b[n_atoms] = 1.0;

  return lp_feasible_point(A, b, tol).has_value();
}

bool contains_set(const ConvexSetSpec& big, const ConvexSetSpec& small, double tol) {
  if (small.solid && !big.solid) return false;
  for (const auto& g : small.generators)
    if (!contains(big, g, tol)) return false;
  if (!small.rays.empty()) {
    if (big.rays.empty()) {
      for (const auto& r : small.rays)
        if ((r > tol).any()) return false;
      return true;
    }
    // each ray of the smaller set must lie in the bigger cone
    Eigen::Index n_atoms = big.space.size();
    Eigen::MatrixXd R(n_atoms, static_cast<Eigen::Index>(big.rays.size()));
    for (std::size_t j = 0; j < big.rays.size(); ++j)
      R.col(static_cast<Eigen::Index>(j)) = big.rays[j].matrix();
    for (const auto& r : small.rays)
      if (!lp_feasible_point(R, r.matrix(), tol).has_value()) return false;
  }
  return true;
}

}  // namespace gsd
