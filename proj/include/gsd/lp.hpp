#pragma once

#include <optional>

#include <Eigen/Dense>

namespace gsd {

// Phase-I simplex: decides feasibility of {x >= 0 : A x = b} and returns a
// feasible point when one exists. Bland's rule, dense tableau; meant for the
// tiny systems produced by polytope membership queries.
std::optional<Eigen::VectorXd> lp_feasible_point(Eigen::MatrixXd A, Eigen::VectorXd b,
                                                 double tol = 1e-9);

}  // namespace gsd
