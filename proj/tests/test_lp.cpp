#include <gtest/gtest.h>

#include <cmath>

#include "mahler/lp.hpp"
#include "mahler/rng.hpp"

using namespace mahler;

TEST(Lp, SmallProgramOptimum) {
  // min -x1 - 2 x2 s.t. x1 + x2 + s1 = 4, x1 + 3 x2 + s2 = 6: optimum at (3, 1).
  Eigen::MatrixXd a(2, 4);
  a << 1, 1, 1, 0, 1, 3, 0, 1;
  const Eigen::VectorXd b = Eigen::Vector2d(4, 6);
  Eigen::VectorXd c(4);
  c << -1, -2, 0, 0;
  const auto r = solve_standard_lp(a, b, c);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, -5.0, 1e-12);
  EXPECT_NEAR(r.x(0), 3.0, 1e-12);
  EXPECT_NEAR(r.x(1), 1.0, 1e-12);
}

TEST(Lp, InfeasibleAndUnbounded) {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  EXPECT_EQ(solve_standard_lp(a, Eigen::VectorXd::Constant(1, -1.0), Eigen::Vector2d(1, 1)).status,
            LpStatus::Infeasible);
  Eigen::MatrixXd u(1, 2);
  u << 1, -1;
  EXPECT_EQ(solve_standard_lp(u, Eigen::VectorXd::Constant(1, 1.0), Eigen::Vector2d(0, -1)).status, LpStatus::Unbounded);
}

TEST(LpProperty, GaugeOfCrossPolytopeIsL1Norm) {
  CounterRng rng(41, 0);
  for (int n = 2; n <= 6; ++n) {
    const Eigen::MatrixXd e = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd u(n);
      for (int i = 0; i < n; ++i) u(i) = rng.normal();
      EXPECT_NEAR(symmetric_hull_gauge(e, u), u.lpNorm<1>(), 1e-12 * u.lpNorm<1>());
    }
  }
}

TEST(LpProperty, GaugeOfCubeVerticesIsMaxNorm) {
  CounterRng rng(43, 0);
  const int n = 3;
  Eigen::MatrixXd v(n, 4);
  v << 1, 1, 1, 1, 1, 1, -1, -1, 1, -1, 1, -1;
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u(i) = rng.normal();
    EXPECT_NEAR(symmetric_hull_gauge(v, u), u.lpNorm<Eigen::Infinity>(), 1e-12 * u.norm());
  }
}

TEST(Lp, GaugeOutsideSpanIsInfinite) {
  const Eigen::MatrixXd p = Eigen::Vector3d(1, 0, 0);
  EXPECT_TRUE(std::isinf(symmetric_hull_gauge(p, Eigen::Vector3d(0, 1, 0))));
}
