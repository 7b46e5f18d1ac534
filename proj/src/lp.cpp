#include "mahler/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mahler {
namespace {

constexpr double kPivotEps = 1e-11;

// Tableau with rows 0..m-1 for constraints and row m for reduced costs; the
// last column holds the right-hand side.
class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(static_cast<std::size_t>(rows)) {}

  double& at(int r, int c) { return t_(r, c); }
  double rhs(int r) const { return t_(r, t_.cols() - 1); }
  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < t_.rows(); ++i)
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Minimizes the objective held in the cost row over columns [0, allowed).
  LpStatus run(int allowed) {
    const int max_iter = 50 * (rows() + cols()) + 1000;
    for (int iter = 0; iter < max_iter; ++iter) {
      int enter = -1;
      for (int c = 0; c < allowed; ++c) {
        if (t_(rows(), c) < -kPivotEps) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows(); ++r) {
        if (t_(r, enter) > kPivotEps) {
          const double ratio = rhs(r) / t_(r, enter);
          if (ratio < best - 1e-15 ||
              (ratio <= best + 1e-15 && leave >= 0 && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }

  Eigen::MatrixXd t_;

 private:
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_standard_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  // Columns: n structural, m artificial.
  Tableau tab(m, n + m);
  for (int r = 0; r < m; ++r) {
    const double sign = b(r) < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tab.at(r, j) = sign * a(r, j);
    tab.at(r, n + r) = 1.0;
    tab.at(r, n + m) = sign * b(r);
    tab.basis()[static_cast<std::size_t>(r)] = n + r;
  }
  // Phase I: minimize the sum of artificials.
  for (int r = 0; r < m; ++r) tab.t_.row(m) -= tab.t_.row(r);
  for (int r = 0; r < m; ++r) tab.at(m, n + r) = 0.0;
  LpResult result;
  const LpStatus phase1 = tab.run(n + m);
  if (phase1 == LpStatus::IterationLimit) {
    result.status = phase1;
    return result;
  }
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.t_(m, n + m) > 1e-9 * scale) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (tab.basis()[static_cast<std::size_t>(r)] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.at(r, j)) > kPivotEps) {
        tab.pivot(r, j);
        break;
      }
    }
  }
  // Phase II cost row.
  tab.t_.row(m).setZero();
  for (int j = 0; j < n; ++j) tab.at(m, j) = c(j);
  for (int r = 0; r < m; ++r) {
    const int bj = tab.basis()[static_cast<std::size_t>(r)];
    if (bj < n && c(bj) != 0.0) tab.t_.row(m) -= c(bj) * tab.t_.row(r);
  }
  // Artificial columns are barred from re-entering.
  result.status = tab.run(n);
  result.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    const int bj = tab.basis()[static_cast<std::size_t>(r)];
    if (bj < n) result.x(bj) = tab.rhs(r);
  }
  result.objective = c.dot(result.x);
  return result;
}

double symmetric_hull_gauge(const Eigen::MatrixXd& points, const Eigen::VectorXd& u) {
  const auto k = points.cols();
  Eigen::MatrixXd a(points.rows(), 2 * k);
  a << points, -points;
  const Eigen::VectorXd c = Eigen::VectorXd::Ones(2 * k);
  const LpResult r = solve_standard_lp(a, u, c);
  if (r.status == LpStatus::Infeasible) return std::numeric_limits<double>::infinity();
  return r.objective;
}

}  // namespace mahler
