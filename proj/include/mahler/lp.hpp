#pragma once

// Dense two-phase simplex for small linear programs in standard form.

#include <Eigen/Dense>

namespace mahler {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

/// min c.x subject to A x = b, x >= 0. Bland's rule; no degeneracy cycling.
LpResult solve_standard_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

/// Gauge of the symmetric hull conv(+-p_j) at u: min sum |lambda_j| subject to
/// sum lambda_j p_j = u, where the p_j are the columns of `points`. Returns
/// +inf when u is outside the linear span of the points.
double symmetric_hull_gauge(const Eigen::MatrixXd& points, const Eigen::VectorXd& u);

}  // namespace mahler
