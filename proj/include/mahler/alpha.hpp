#pragma once

// The alpha functional on planar shell bodies: the ratio for one (theta, I),
// the minimum over intervals, the maximum over theta, the restricted variant
// over intervals [0, phi], and a heuristic minimization over bodies.

#include <cstdint>
#include <utility>
#include <vector>

#include "mahler/geometry2d.hpp"
#include "mahler/measure2d.hpp"
#include "mahler/numeric.hpp"

namespace mahler {

struct AlphaEvaluation {
  int n = 4;
  double theta = 0.0;
  ConeInterval interval;
  double value = 0.0;  // numerator_left * numerator_right / denominator^2
  double numerator_left = 0.0;   // mu(C(I) cap S)
  double numerator_right = 0.0;  // mu(C(I) cap S polar)
  double denominator = 0.0;      // int_I g
};

struct AlphaOptions {
  double ell_min = 1e-3;
  int interval_grid = 64;  // per axis of the (start, length) grid
  int theta_grid = 128;
  int refine_starts = 8;   // best grid cells refined by coordinate descent
  double angle_tol = 1e-6;
  Exec exec = Exec::Parallel;
};

struct IntervalMin {
  ConeInterval interval;
  double value = 0.0;
};

struct AlphaWitness {
  double theta = 0.0;
  ConeInterval interval;
  double value = 0.0;
};

/// Smallest admissible exponent. The floor itself is defined for n >= 2.
inline constexpr int kAlphaMinExponent = 3;

/// Throws OutOfClass unless S lies in the shell 1 <= |x| <= sqrt(n+1).
void require_shell_body(int n, const SymmetricPolygon2& s);

/// Reference evaluation by adaptive quadrature of the sector integrals.
AlphaEvaluation alpha_term(int n, double theta, const ConeInterval& interval, const SymmetricPolygon2& s);

/// l -> 0 limit of alpha_term over [t - l/2, t + l/2].
double limit_point_value(int n, double theta, double t, const SymmetricPolygon2& s);

/// 1 / ((n+1)^2 (n+1)^{(n+1)/2}).
double lemma_floor(int n);

/// Closed-form evaluator for a fixed (body, theta); shares the sector tables
/// of S and its polar across all intervals.
class AlphaSlice {
 public:
  AlphaSlice(int n, double theta, const SymmetricPolygon2& s, const SymmetricPolygon2& s_polar);
  double operator()(double start, double length) const;
  AlphaEvaluation evaluate(double start, double length) const;
  double theta() const { return theta_; }

 private:
  int n_;
  double theta_;
  SectorTable body_;
  SectorTable polar_;
};

IntervalMin min_over_intervals(int n, double theta, const SymmetricPolygon2& s, const AlphaOptions& opt = {});
/// Minimum over intervals [0, phi], phi in [ell_min, pi].
IntervalMin min_over_anchored(int n, double theta, const SymmetricPolygon2& s, const AlphaOptions& opt = {});

/// max over theta of min over intervals.
AlphaWitness alpha_n_S(int n, const SymmetricPolygon2& s, const AlphaOptions& opt = {});
/// max over theta of min over intervals [0, phi].
AlphaWitness alpha1_n_S(int n, const SymmetricPolygon2& s, const AlphaOptions& opt = {});

/// Inner minima on a uniform theta grid of `count` points over [0, pi).
std::vector<IntervalMin> theta_sweep(int n, const SymmetricPolygon2& s, int count, const AlphaOptions& opt);

struct AlphaSearchConfig {
  int n = 4;
  std::vector<int> vertex_pairs{4, 6, 8};
  int restarts = 8;
  int budget = 40;  // descent steps per restart
  std::uint64_t seed = 1;
  double ell_min = 1e-3;
  bool include_circle = true;
};

struct AlphaSearchResult {
  int n = 4;
  double alpha_hat = 0.0;  // an upper estimate of the minimum over bodies
  SymmetricPolygon2 argmin_body = circle_polygon(8);
  double argmax_theta = 0.0;
  ConeInterval argmin_interval;
  std::vector<std::pair<int, double>> search_trace;  // (iteration, best so far)
};

/// Random restarts plus vertex descent with projection back into the shell
/// class. Throws SearchFailed when no feasible body is produced.
AlphaSearchResult alpha_search(const AlphaSearchConfig& config, const AlphaOptions& final_opt = {});

/// Rescale to inradius 1 and pull vertices outside the outer radius back in,
/// repeated until the body is in the class; if that stalls, take the hull with
/// a polygon circumscribed about the inner disk. Returns false only for
/// degenerate input or a shell too thin for the 64-gon.
bool project_to_shell(std::vector<Vec2> half, const ShellConstraint& shell, SymmetricPolygon2& out);

}  // namespace mahler
