#pragma once

// Anisotropic measures r^n |cos(t + theta)|^{n-1} dr dt on cones over circle
// arcs, needle densities, and the sin^k-concavity test.

#include <functional>
#include <vector>

#include "mahler/geometry2d.hpp"

namespace mahler {

struct AnisotropicMeasure2 {
  int exponent_n = 2;
  double theta = 0.0;  // reduced to [0, pi)
};

/// theta is reduced mod pi (the density is pi-periodic in theta).
AnisotropicMeasure2 make_measure(int n, double theta);

/// Closed arc [start, start + length] of the unit circle, 0 < length <= pi.
struct ConeInterval {
  double start = 0.0;
  double length = 0.0;
  double end() const { return start + length; }
};

/// Throws DegenerateInterval for length <= 0 and InvalidArgument for length > pi.
ConeInterval make_interval(double start, double length);

double g_density(const AnisotropicMeasure2& m, double t);
/// Integral of the angular weight over the interval (Gauss-Legendre, split at
/// zeros of the cosine).
double g_integral(const AnisotropicMeasure2& m, const ConeInterval& interval);
/// mu(C(I) cap P) = int_I g(t) rho_P(t)^{n+1} / (n+1) dt.
double sector_measure(const SymmetricPolygon2& p, const AnisotropicMeasure2& m, const ConeInterval& interval);
/// mu(P) over the whole plane.
double full_measure(const SymmetricPolygon2& p, const AnisotropicMeasure2& m);

/// Same integrals over an arbitrary [a, b] (b >= a), no length restriction.
double g_integral_range(const AnisotropicMeasure2& m, double a, double b);
double sector_measure_range(const SymmetricPolygon2& p, const AnisotropicMeasure2& m, double a, double b);

/// int_{s0}^{s1} |cos s|^m ds via the reduction-formula antiderivative, with a
/// quadrature fallback when the result is small enough for cancellation to matter.
double cos_power_integral(int m, double s0, double s1);

/// Memoized sector measures of one body under one rotated measure. Each edge
/// piece is integrated in closed form: with u = tan(t - psi) the integrand
/// becomes |cos(beta) - u sin(beta)|^{n-1} / ((n+1)|a|^{n+1}) du.
class SectorTable {
 public:
  SectorTable(const SymmetricPolygon2& p, const AnisotropicMeasure2& m);

  /// Sector measure over [a, b], b >= a.
  double measure(double a, double b) const;
  double total() const { return period_total_; }
  const AnisotropicMeasure2& measure_params() const { return measure_; }

 private:
  struct Piece {
    double t0 = 0.0, t1 = 0.0;
    double psi = 0.0;       // facet normal angle
    double coef = 0.0;      // 1 / ((n+1) |a|^{n+1})
    double cos_beta = 0.0, sin_beta = 0.0, sign = 1.0;
    double cumulative = 0.0;  // integral over [0, t0)
  };

  double piece_integral(const Piece& piece, double a, double b) const;
  double cumulative_at(double t) const;
  double direct(double a, double b) const;

  AnisotropicMeasure2 measure_;
  std::vector<Piece> pieces_;  // cover [0, 2 pi)
  double period_total_ = 0.0;  // integral over [0, 2 pi)
};

struct NeedleDensity {
  int k = 0;
  double t0 = 0.0;
  ConeInterval interval;
  double norm_constant = 1.0;

  /// C cos^k(t - t0) on the interval, zero outside.
  double operator()(double t) const;
};

/// Normalizes C cos^k(t - t0) to a probability density on the interval.
/// Throws InvalidNeedle when cos(t - t0) is not positive on the interior.
NeedleDensity make_needle(int k, double t0, const ConeInterval& interval);

double needle_integral(const std::function<double(double)>& f, const NeedleDensity& needle);

/// Samples of a function on a uniform grid over [a, b].
struct SampledFunction {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> values;

  double x(std::size_t i) const { return a + (b - a) * static_cast<double>(i) / static_cast<double>(values.size() - 1); }
  static SampledFunction sample(const std::function<double(double)>& f, double a, double b, std::size_t count);
};

struct ConcavityReport {
  bool pass = true;
  double worst_violation = 0.0;  // rhs - lhs of the chord inequality, maximized
  double x1 = 0.0, x2 = 0.0, alpha = 0.0;
};

/// Chord inequality f^{1/k}(a x1 + (1-a) x2) >= sin(a d)/sin d f(x1)^{1/k}
///   + sin((1-a) d)/sin d f(x2)^{1/k}, d = |x2 - x1|, on every grid triple with
/// a in {1/4, 1/2, 3/4} whose interior point is itself a grid node.
ConcavityReport sin_k_concave_check(const SampledFunction& f, int k, double slack = 1e-9);

}  // namespace mahler
