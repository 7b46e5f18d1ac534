#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mahler/bodynd.hpp"
#include "mahler/errors.hpp"
#include "mahler/numeric.hpp"
#include "mahler/rng.hpp"
#include "oracles.hpp"

using namespace mahler;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd cube_vertices(int n) {
  Eigen::MatrixXd v(1 << n, n);
  for (int i = 0; i < (1 << n); ++i)
    for (int j = 0; j < n; ++j) v(i, j) = (i >> j) & 1 ? 1.0 : -1.0;
  return v;
}

}  // namespace

TEST(BodyNd, CubeRadialAndSupport) {
  CounterRng rng(1, 0);
  const BodyND k = cube(4);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd u = oracle::random_direction(4, rng);
    EXPECT_NEAR(radial_nd(k, u), 1.0 / u.lpNorm<Eigen::Infinity>(), 1e-13);
    EXPECT_NEAR(support_nd(k, u), u.lpNorm<1>(), 1e-13);
  }
}

TEST(BodyNdProperty, VertexAndFacetRoutesAgree) {
  // The same cube through the LP gauge (vertices only) and the facet formula.
  CounterRng rng(2, 0);
  for (int n = 2; n <= 5; ++n) {
    const BodyND by_vertices = BodyND::from_vertices(cube_vertices(n));
    const BodyND by_facets = BodyND::from_facets(Eigen::MatrixXd::Identity(n, n));
    for (int i = 0; i < 30; ++i) {
      const Eigen::VectorXd u = oracle::random_direction(n, rng);
      EXPECT_NEAR(radial_nd(by_vertices, u), radial_nd(by_facets, u), 1e-11);
      EXPECT_NEAR(support_nd(by_vertices, u), support_nd(by_facets, u), 1e-11);
    }
  }
}

TEST(BodyNdProperty, PolarInvolutionAndDuality) {
  CounterRng rng(3, 0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const BodyND k = random_symmetric_polytope(3, 8, seed);
    const BodyND kpp = polar_nd(polar_nd(k));
    for (int i = 0; i < 10; ++i) {
      const Eigen::VectorXd u = oracle::random_direction(3, rng);
      EXPECT_NEAR(radial_nd(kpp, u), radial_nd(k, u), 1e-10);
      EXPECT_NEAR(radial_nd(polar_nd(k), u) * support_nd(k, u), 1.0, 1e-10);
    }
  }
  const BodyND e = BodyND::from_ellipsoid(random_linear_map(4, 5.0, 9));
  const Eigen::VectorXd u = oracle::random_direction(4, rng);
  EXPECT_NEAR(radial_nd(polar_nd(e), u) * support_nd(e, u), 1.0, 1e-12);
}

TEST(BodyNd, DegenerateInputsRaise) {
  Eigen::MatrixXd flat(2, 3);
  flat << 1, 0, 0, 0, 1, 0;
  EXPECT_THROW(BodyND::from_vertices(flat), Error);
  EXPECT_THROW(BodyND::from_facets(flat), Error);
  EXPECT_THROW(exact_reference("dodecahedron", 3), Error);
}

TEST(SphereSampleTest, HaltonIsAntipodalAndUnit) {
  const auto s = SphereSample::halton(5, 1000, 4);
  ASSERT_EQ(s.size(), 1000u);
  for (Eigen::Index j = 0; j < 1000; j += 2) {
    EXPECT_NEAR(s.directions.col(j).norm(), 1.0, 1e-14);
    EXPECT_EQ(s.directions.col(j + 1), -s.directions.col(j));
  }
  const auto t = SphereSample::halton(5, 1000, 4);
  EXPECT_EQ(s.directions, t.directions);
}

TEST(VolumeMc, SerialAndParallelAgreeBitwise) {
  const BodyND k = random_symmetric_polytope(4, 10, 5);
  const auto s = SphereSample::halton(4, 20000, 1);
  const auto a = mahler_product(k, s, Exec::Serial);
  const auto b = mahler_product(k, s, Exec::Parallel);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.se, b.se);
}

TEST(VolumeMc, BallIsExact) {
  for (int n = 2; n <= 8; ++n) {
    const auto e = mahler_product(ball(n, 1.7), SphereSample::halton(n, 1000, 2));
    EXPECT_NEAR(e.value, exact_reference("ball", n), 1e-12 * exact_reference("ball", n));
  }
}

TEST(VolumeMc, CubeVolumeWithinStandardErrors) {
  for (int n = 2; n <= 6; ++n) {
    const auto e = volume_radial_mc(cube(n), SphereSample::halton(n, 200000, 3));
    EXPECT_LT(std::abs(e.value - std::pow(2.0, n)), 4.0 * e.se + 1e-12) << "n " << n;
  }
}

TEST(VolumeMcProperty, PlanarProductMatchesPolygonAreas) {
  // Second route: exact polygon areas from the planar kernel.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = random_shell_body(5, {1.0, 2.0}, seed);
    Eigen::MatrixXd v(static_cast<Eigen::Index>(p.pairs()), 2);
    for (std::size_t i = 0; i < p.pairs(); ++i) v.row(static_cast<Eigen::Index>(i)) << p.half()[i].x, p.half()[i].y;
    const auto e = mahler_product(BodyND::from_vertices(v), SphereSample::halton(2, 100000, seed));
    const double exact = area(p) * area(polar(p));
    EXPECT_LT(std::abs(e.value - exact), 4.0 * e.se + 1e-9) << "seed " << seed;
  }
}

TEST(VolumeMcProperty, LinearImagesScaleTheVolume) {
  const Eigen::MatrixXd t = random_linear_map(3, 4.0, 6);
  const auto e = volume_radial_mc(transform(cube(3), t), SphereSample::halton(3, 200000, 7));
  const double expected = 8.0 * std::abs(t.determinant());
  EXPECT_LT(std::abs(e.value - expected), 4.0 * e.se);
}

TEST(Bounds, RemarkRouteEqualsBetaAtTheFloor) {
  // The planar constant at exponent n - 1 is 1 / (n^2 n^{n/2}).
  EXPECT_NEAR(beta_bound(4, 1.0 / 256.0), std::pow(kPi, 4) / 64.0, 1e-12);
  for (int n = 3; n <= 10; ++n) {
    const double floor = 1.0 / (n * n * std::pow(n, n / 2.0));
    EXPECT_NEAR(beta_bound(n, floor), remark_bound(n), 1e-12 * remark_bound(n));
  }
}

TEST(Bounds, CubeAndBallPassBothChecks) {
  const auto s = SphereSample::halton(4, 100000, 8);
  const auto cube_low = verify_main(cube(4), 1.0 / 256.0, s);
  EXPECT_TRUE(cube_low.pass);
  EXPECT_NEAR(cube_low.bound, std::pow(kPi, 4) / 64.0, 1e-12);
  EXPECT_TRUE(santalo_check(cube(4), s).pass);
  const auto ball_up = santalo_check(ball(4), s);
  EXPECT_TRUE(ball_up.pass);
  EXPECT_NEAR(ball_up.margin, 0.0, 1e-12);
}

TEST(John, TransformedCubeReturnsToACube) {
  const BodyND k = transform(cube(3), random_linear_map(3, 6.0, 11));
  const auto j = john_normalize(k);
  ASSERT_TRUE(j.body.has_facets());
  // Unit inscribed ball: every facet of the normalized cube is at distance 1.
  for (Eigen::Index i = 0; i < j.body.facets().rows(); ++i) EXPECT_NEAR(j.body.facets().row(i).norm(), 1.0, 1e-5);
  EXPECT_LE(j.gap, 1e-6);
}

TEST(John, VertexOnlyBodiesAreRejected) {
  EXPECT_THROW(john_normalize(random_symmetric_polytope(3, 6, 1)), Error);
}

TEST(Sections, CubeCoordinatePlaneIsExact) {
  const auto sec = section_plane(cube(4));
  EXPECT_LT(sec.discrepancy, 1e-3);
  EXPECT_NEAR(area(sec.section), 4.0, 1e-9);
  EXPECT_NEAR(projection_section_gap(ball(3), Eigen::MatrixXd::Identity(3, 2)), 0.0, 1e-12);
}
