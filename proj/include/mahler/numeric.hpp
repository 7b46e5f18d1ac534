#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mahler {

// Geometric predicate tolerance and the tolerance used for reported values.
inline constexpr double kGeomEps = 1e-12;
inline constexpr double kValueTol = 1e-9;

// Every data-parallel kernel has a serial reference path selected by Exec.
// Both paths return bitwise identical results: reductions run over fixed
// chunks whose partial sums are combined in chunk order.
enum class Exec { Serial, Parallel };

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with 2^level nodes (level 1..14); computed once, cached.
const GaussRule& gauss_legendre(int level);

/// Fixed rule on [a, b].
template <class F>
double integrate_fixed(const F& f, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  CompensatedSum s;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
  return half * s.value();
}

inline constexpr int kGaussMinLevel = 3;   // 8 nodes
inline constexpr int kGaussMaxLevel = 14;  // 16384 nodes

/// Gauss-Legendre with the node count doubled until two successive estimates
/// agree to rel_tol (relative), capped at 2^14 nodes. The integrand must be
/// smooth on [a, b]; callers split at kinks.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-12) {
  if (a == b) return 0.0;
  double prev = integrate_fixed(f, a, b, gauss_legendre(kGaussMinLevel));
  for (int level = kGaussMinLevel + 1; level <= kGaussMaxLevel; ++level) {
    const double cur = integrate_fixed(f, a, b, gauss_legendre(level));
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) || std::abs(cur - prev) < 1e-300) return cur;
    prev = cur;
  }
  return prev;
}

/// Deterministic sum of f(0..count-1) over fixed chunks of `chunk` terms.
template <class F>
double chunked_sum(std::size_t count, const F& f, Exec exec, std::size_t chunk = 4096) {
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<double> partial(chunks, 0.0);
  const long nchunks = static_cast<long>(chunks);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long c = 0; c < nchunks; ++c) {
    CompensatedSum s;
    const std::size_t lo = static_cast<std::size_t>(c) * chunk;
    const std::size_t hi = lo + chunk < count ? lo + chunk : count;
    for (std::size_t i = lo; i < hi; ++i) s.add(f(i));
    partial[static_cast<std::size_t>(c)] = s.value();
  }
  CompensatedSum total;
  for (double x : partial) total.add(x);
  return total.value();
}

/// Surface area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);
/// Volume of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1).
double ball_volume(int n);
/// Integral of |cos t|^m over any interval of length pi.
double cos_power_half_period(int m);

/// Reduce an angle to [0, period).
double wrap_angle(double t, double period);

}  // namespace mahler
