#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mahler/errors.hpp"
#include "mahler/measure2d.hpp"
#include "mahler/rng.hpp"
#include "oracles.hpp"

using namespace mahler;

namespace {

constexpr double kPi = std::numbers::pi;

SymmetricPolygon2 square() {
  const std::vector<Vec2> pts{{1, 1}, {-1, 1}};
  return make_polygon(pts);
}

}  // namespace

TEST(Measure2d, SquareFullMeasureIsCartesianMoment) {
  // |x|^2 over [-1, 1]^2 is 2 * 2/3.
  EXPECT_NEAR(full_measure(square(), make_measure(3, 0.0)), 4.0 / 3.0, 1e-13);
  // Unit disk (256-gon, circumscribed) approaches int |cos|^{n-1} / (n+1).
  const double disk = full_measure(circle_polygon(256), make_measure(4, 0.4));
  EXPECT_NEAR(disk, (8.0 / 3.0) / 5.0, 1e-3);
}

TEST(Measure2d, ThetaIsReducedModPi) {
  const auto m = make_measure(4, 3.5 * kPi);
  EXPECT_NEAR(m.theta, 0.5 * kPi, 1e-12);
  const auto p = random_shell_body(5, {1.0, 2.0}, 3);
  EXPECT_NEAR(full_measure(p, make_measure(4, 0.3)), full_measure(p, make_measure(4, 0.3 + kPi)), 1e-13);
}

TEST(Measure2d, IntervalValidation) {
  EXPECT_THROW(make_interval(0.0, 0.0), Error);
  EXPECT_THROW(make_interval(0.0, 4.0), Error);
  EXPECT_NO_THROW(make_interval(1.0, kPi));
}

TEST(Measure2dProperty, SectorMeasureMatchesCartesianOracle) {
  CounterRng rng(17, 0);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto p = random_shell_body(rng.uniform_int(2, 9), {1.0, 2.2}, seed);
    const int n = rng.uniform_int(2, 7);
    const double theta = rng.uniform(0.0, kPi);
    const double a = rng.uniform(0.0, 2 * kPi), len = rng.uniform(0.01, kPi);
    const double expected = oracle::cartesian_sector_measure(p, n, theta, a, len);
    const double got = sector_measure(p, make_measure(n, theta), make_interval(a, len));
    EXPECT_NEAR(got, expected, 1e-11 * std::max(1.0, expected)) << "seed " << seed << " n " << n;
  }
}

TEST(Measure2dProperty, SectorTableMatchesQuadrature) {
  CounterRng rng(19, 0);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto p = random_shell_body(6, {1.0, 2.2}, seed);
    const auto m = make_measure(rng.uniform_int(2, 8), rng.uniform(0.0, kPi));
    const SectorTable table(p, m);
    const double a = rng.uniform(-4.0, 4.0), b = a + rng.uniform(0.0, 7.0);
    EXPECT_NEAR(table.measure(a, b), sector_measure_range(p, m, a, b), 1e-12);
  }
}

TEST(Measure2dProperty, AdditivityMonotonicityScaling) {
  CounterRng rng(23, 0);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto p = random_shell_body(5, {1.0, 2.2}, seed);
    const int n = rng.uniform_int(2, 6);
    const auto m = make_measure(n, rng.uniform(0.0, kPi));
    const double a = rng.uniform(0.0, 2 * kPi), l1 = rng.uniform(0.01, 1.5), l2 = rng.uniform(0.01, 1.5);
    const double whole = sector_measure(p, m, make_interval(a, l1 + l2));
    const double parts = sector_measure(p, m, make_interval(a, l1)) + sector_measure(p, m, make_interval(a + l1, l2));
    EXPECT_NEAR(whole, parts, 1e-12 * std::max(1.0, whole));
    EXPECT_GE(whole + 1e-15, sector_measure(p, m, make_interval(a, l1)));
    // Body inclusion: the inscribed unit disk lies inside p.
    EXPECT_GE(full_measure(p, m) + 1e-12, full_measure(circle_polygon(64), m) * std::pow(std::cos(kPi / 64), n + 1));
    const double c = rng.uniform(0.5, 2.0);
    EXPECT_NEAR(full_measure(scale(p, c), m), std::pow(c, n + 1) * full_measure(p, m), 1e-11 * full_measure(p, m) * std::pow(c, n + 1));
  }
}

TEST(Measure2d, GIntegralAgainstClosedForm) {
  // Over a half period the integral of |cos|^{n-1} is sqrt(pi) Gamma(n/2) / Gamma((n+1)/2).
  for (int n = 2; n <= 8; ++n) {
    const double expected = std::sqrt(kPi) * std::tgamma(n / 2.0) / std::tgamma((n + 1) / 2.0);
    EXPECT_NEAR(g_integral(make_measure(n, 0.7), make_interval(0.2, kPi)), expected, 1e-13);
  }
}

TEST(Measure2d, CosPowerIntegralTinyIntervalsKeepRelativeAccuracy) {
  // Near the zero of cos, the integral over [pi/2 - h, pi/2] is about h^{m+1}/(m+1).
  const double h = 1e-3;
  for (int m = 1; m <= 6; ++m) {
    const double got = cos_power_integral(m, kPi / 2 - h, kPi / 2);
    EXPECT_NEAR(got / (std::pow(h, m + 1) / (m + 1)), 1.0, 1e-5);
  }
}

TEST(Needle, DensityIsNormalized) {
  for (int k = 0; k <= 4; ++k) {
    const auto d = make_needle(k, 0.4, make_interval(0.0, 1.2));
    EXPECT_NEAR(needle_integral([](double) { return 1.0; }, d), 1.0, 1e-13);
    EXPECT_EQ(d(-0.1), 0.0);
  }
}

TEST(Needle, InvalidCenterRaises) {
  EXPECT_THROW(make_needle(2, 3.0, make_interval(0.0, 1.0)), Error);
}

TEST(SinConcavity, AffineNeedleDensityPasses) {
  // cos^k(t - t0) is the k-th power of a linear function in the plane.
  for (int k = 1; k <= 4; ++k) {
    const auto f = SampledFunction::sample([k](double t) { return std::pow(std::cos(t - 0.3), k); }, -0.8, 1.2, 257);
    const auto r = sin_k_concave_check(f, k);
    EXPECT_TRUE(r.pass) << "k " << k << " violation " << r.worst_violation;
  }
}

TEST(SinConcavity, ConstantFailsForPositiveK) {
  // sin(a d)/sin d + sin((1-a) d)/sin d > 1 for d in (0, pi).
  const auto f = SampledFunction::sample([](double) { return 1.0; }, 0.0, 2.0, 65);
  EXPECT_FALSE(sin_k_concave_check(f, 2).pass);
}

TEST(SinConcavity, ConvexBumpFails) {
  const auto f = SampledFunction::sample([](double t) { return 1.0 + 4.0 * (t - 0.5) * (t - 0.5); }, 0.0, 1.0, 65);
  EXPECT_FALSE(sin_k_concave_check(f, 1).pass);
}
