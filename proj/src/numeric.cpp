#include "mahler/numeric.hpp"

#include <array>
#include <mutex>
#include <numbers>

#include "mahler/errors.hpp"

namespace mahler {
namespace {

GaussRule build_rule(int count) {
  GaussRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_count.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int level) {
  require(level >= 1 && level <= kGaussMaxLevel, "gauss_legendre: level out of range");
  static std::array<GaussRule, kGaussMaxLevel + 1> rules;
  static std::array<std::once_flag, kGaussMaxLevel + 1> flags;
  std::call_once(flags[level], [level] { rules[level] = build_rule(1 << level); });
  return rules[level];
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double cos_power_half_period(int m) {
  return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (m + 1)) / std::tgamma(0.5 * m + 1.0);
}

double wrap_angle(double t, double period) {
  double r = std::fmod(t, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace mahler
