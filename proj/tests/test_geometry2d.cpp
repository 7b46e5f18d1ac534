#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mahler/errors.hpp"
#include "mahler/geometry2d.hpp"
#include "mahler/rng.hpp"
#include "oracles.hpp"

using namespace mahler;

namespace {

constexpr double kPi = std::numbers::pi;

SymmetricPolygon2 square() {
  const std::vector<Vec2> pts{{1, 1}, {-1, 1}};
  return make_polygon(pts);
}

SymmetricPolygon2 random_body(std::uint64_t seed) {
  CounterRng rng(seed, 77);
  return random_shell_body(rng.uniform_int(2, 12), {1.0, std::sqrt(5.0)}, seed);
}

}  // namespace

TEST(Geometry2d, SquareAndDiamondArePolarPair) {
  const auto s = square();
  const auto d = polar(s);
  EXPECT_EQ(d.size(), 4u);
  EXPECT_NEAR(area(s), 4.0, 1e-15);
  EXPECT_NEAR(area(d), 2.0, 1e-15);
  EXPECT_NEAR(radial(d, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(radial(s, kPi / 4), std::sqrt(2.0), 1e-15);
}

TEST(Geometry2d, MakePolygonDropsInteriorAndCollinearPoints) {
  const std::vector<Vec2> pts{{1, 0}, {0, 1}, {0.2, 0.2}, {0.5, 0.5}};
  const auto p = make_polygon(pts);
  EXPECT_EQ(p.size(), 4u);
  for (std::size_t i = 0; i < p.pairs(); ++i) EXPECT_EQ(p.vertices()[i + p.pairs()], -p.vertices()[i]);
}

TEST(Geometry2d, DegenerateInputsRaise) {
  const std::vector<Vec2> line{{1, 1}, {2, 2}};
  EXPECT_THROW(make_polygon(line), Error);
  EXPECT_THROW(SymmetricPolygon2::from_symmetric_vertices({{1, 0}, {0, 1}, {1, 0}, {0, -1}}), Error);
}

TEST(Geometry2d, CircumscribedCirclePolygonHasUnitInradius) {
  const auto c = circle_polygon(256);
  EXPECT_NEAR(inradius(c), 1.0, 1e-14);
  EXPECT_NEAR(circumradius(c), 1.0 / std::cos(kPi / 256), 1e-14);
  EXPECT_TRUE(contains_shell(c, ShellConstraint::for_exponent(4)));
}

TEST(Geometry2dProperty, PolarIsAnInvolution) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto p = random_body(seed);
    EXPECT_LT(hausdorff(polar(polar(p)), p), 1e-12) << "seed " << seed;
  }
}

TEST(Geometry2dProperty, RadialOfPolarIsReciprocalSupport) {
  CounterRng rng(3, 0);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto p = random_body(seed);
    const auto q = polar(p);
    for (int k = 0; k < 20; ++k) {
      const double t = rng.uniform(0.0, 2 * kPi);
      EXPECT_NEAR(radial(q, t) * support(p, t), 1.0, 1e-12);
    }
  }
}

TEST(Geometry2dProperty, RadialMatchesRayCast) {
  CounterRng rng(5, 0);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto p = random_body(seed);
    const std::vector<Vec2> poly(p.vertices().begin(), p.vertices().end());
    for (int k = 0; k < 20; ++k) {
      const double t = rng.uniform(0.0, 2 * kPi);
      EXPECT_NEAR(radial(p, t), norm(oracle::boundary_point(poly, t)), 1e-12);
    }
  }
}

TEST(Geometry2dProperty, RandomShellBodiesLieInTheShell) {
  const auto shell = ShellConstraint::for_exponent(4);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto p = random_shell_body(6, shell, seed);
    EXPECT_NEAR(inradius(p), 1.0, 1e-12);
    EXPECT_LE(circumradius(p), shell.r_outer + 1e-12);
  }
  EXPECT_EQ(hausdorff(random_shell_body(6, shell, 9), random_shell_body(6, shell, 9)), 0.0);
}

TEST(Geometry2dProperty, SteinerPreservesAreaAndSymmetrizes) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto p = rotate(random_body(seed), 0.1 * static_cast<double>(seed));
    const auto s = steiner_symmetrize(p, 0.0);
    EXPECT_NEAR(area(s), area(p), 1e-11 * area(p));
    const auto u = unconditionalize(p);
    EXPECT_NEAR(area(u), area(p), 1e-11 * area(p));
    EXPECT_TRUE(is_unconditional(u));
  }
}

TEST(Geometry2d, SteinerAtThirtyDegreesOfTheSquare) {
  // Chord length of the square along the direction at 30 degrees is preserved.
  const auto s = steiner_symmetrize(square(), kPi / 6);
  EXPECT_NEAR(area(s), 4.0, 1e-12);
  EXPECT_NEAR(hausdorff(rotate(s, kPi), s), 0.0, 1e-12);
}

TEST(Geometry2d, RotationAndScaling) {
  const auto p = random_body(11);
  EXPECT_NEAR(area(scale(p, 2.0)), 4.0 * area(p), 1e-12);
  EXPECT_NEAR(radial(rotate(p, 0.3), 1.0), radial(p, 0.7), 1e-12);
  EXPECT_LT(hausdorff(rotate(p, 2 * kPi), p), 1e-12);
}
