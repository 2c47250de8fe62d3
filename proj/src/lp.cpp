#include "gsd/lp.hpp"

#include <vector>

namespace gsd {

std::optional<Eigen::VectorXd> lp_feasible_point(Eigen::MatrixXd A, Eigen::VectorXd b,
                                                 double tol) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();

  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0) {
      A.row(i) *= -1.0;
      b[i] *= -1.0;
    }
  }

  // Tableau for phase I: minimize sum of artificials. Columns: x | artificials | rhs.
  Eigen::MatrixXd T(m + 1, n + m + 1);
  T.setZero();
  T.block(0, 0, m, n) = A;
  T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  T.block(0, n + m, m, 1) = b;
  // objective row: cost 1 on artificials, reduced against the identity basis
  for (Eigen::Index j = 0; j < n; ++j) T(m, j) = -A.col(j).sum();
  T(m, n + m) = -b.sum();

  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  const int max_pivots = 50 * static_cast<int>(m + n + 10);
  for (int it = 0; it < max_pivots; ++it) {
    // Bland: smallest index with negative reduced cost
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (T(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (T(i, enter) > tol) {
        double ratio = T(i, n + m) / T(i, enter);
        if (leave < 0 || ratio < best - tol ||
            (ratio < best + tol && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded phase-I cannot happen; bail defensively
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    }
    basis[leave] = enter;
  }

  if (-T(m, n + m) > tol * (1.0 + b.lpNorm<1>())) return std::nullopt;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = T(i, n + m);
  return x;
}

}  // namespace gsd
