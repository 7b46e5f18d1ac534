#pragma once

// Localization on S^2: hemisphere halving of two functions, iterated cutting,
// pancakes around a target geodesic, needle extraction and needle products.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mahler/bodynd.hpp"
#include "mahler/errors.hpp"
#include "mahler/measure2d.hpp"
#include "mahler/numeric.hpp"

namespace mahler {

using Vec3 = Eigen::Vector3d;
using SphereFunction = std::function<double(const Vec3&)>;

/// Subdivided icosahedron with barycentric spherical-triangle weights summing
/// to 1. Level 6 has 40962 nodes. Immutable once built.
class IcosaGrid {
 public:
  explicit IcosaGrid(int level);
  static const IcosaGrid& shared(int level = 6);

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  std::size_t size() const { return nodes_.size(); }
  int level() const { return level_; }

 private:
  int level_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
  std::vector<std::array<int, 3>> triangles_;
};

/// Integral of G over the open hemisphere centred at x, normalized measure.
/// Product rule in a frame at x: Gauss-Legendre in the height, trapezoid in
/// the azimuth.
double hemisphere_integral(const SphereFunction& g, const Vec3& x, int resolution = 64);

/// Intersection of the open hemispheres {u : c.u > 0} over the cut normals.
struct SphericalRegion {
  std::vector<Vec3> cuts;

  bool contains(const Vec3& u, double slack = 0.0) const;
  SphericalRegion with_cut(const Vec3& c) const;
  /// A point strictly inside the region, or nothing when none was found.
  std::optional<Vec3> interior_point() const;
  /// max over the closed region of p.u, evaluated exactly from the vertices,
  /// the critical points on each boundary circle, and p itself.
  double max_linear(const Vec3& p) const;
};

/// Smooth complementary cut weight: ramp(d) + ramp(-d) = 1, ramp = 1 for
/// d >= width and 0 for d <= -width.
double cut_ramp(double d, double width);
inline constexpr double kRampWidth = 0.03;

/// Soft membership weight of u: product of the ramps over the cuts.
double region_weight(const SphericalRegion& region, const Vec3& u, double width = kRampWidth);

struct RegionMasses {
  double g1 = 0.0, g2 = 0.0;
  double abs1 = 0.0, abs2 = 0.0;  // masses of |G_i|
  double measure = 0.0;
};

/// G values sampled once on the shared grid.
struct GridFunctions {
  const IcosaGrid* grid = nullptr;
  std::vector<double> g1, g2;

  static GridFunctions sample(const SphereFunction& g1, const SphereFunction& g2, const IcosaGrid& grid, Exec exec = Exec::Parallel);
};

RegionMasses region_masses(const GridFunctions& g, const SphericalRegion& region, Exec exec = Exec::Serial);

struct CutPolicy {
  enum class Kind { Free, OrthogonalTo };
  Kind kind = Kind::Free;
  Vec3 axis = Vec3::UnitZ();  // normals must be orthogonal to this axis

  static CutPolicy free() { return {}; }
  static CutPolicy orthogonal_to(const Vec3& axis) { return {Kind::OrthogonalTo, axis.normalized()}; }
};

struct Halving {
  Vec3 x;
  double residual = 0.0;  // max_i |mass_i(x side) - mass_i / 2| / abs_mass_i
};

inline constexpr double kHalvingTol = 1e-5;

class HalvingError : public Error {
 public:
  HalvingError(const std::string& what, double residual, std::vector<SphericalRegion> partial)
      : Error(ErrorKind::HalvingFailed, what), residual_(residual), partial_(std::move(partial)) {}
  double residual() const { return residual_; }
  const std::vector<SphericalRegion>& partial() const { return partial_; }

 private:
  double residual_;
  std::vector<SphericalRegion> partial_;
};

/// Hemisphere x^ that halves both soft region masses. Degree tracking on a
/// coarse icosahedral mesh locates sign-winding cells; Newton in the tangent
/// plane refines. Throws HalvingError when the tolerance is not met.
Halving find_halving_hemisphere(const GridFunctions& g, const SphericalRegion& region,
                                const CutPolicy& policy = CutPolicy::free(), double tol = kHalvingTol);
Halving find_halving_hemisphere(const SphereFunction& g1, const SphereFunction& g2, const SphericalRegion& region,
                                const CutPolicy& policy = CutPolicy::free(), double tol = kHalvingTol);

struct Leaf {
  SphericalRegion region;
  RegionMasses masses;
};

/// `steps` rounds of halving, keeping both halves; 2^steps leaves.
std::vector<Leaf> cut_iterate(const GridFunctions& g, int steps, const CutPolicy& policy = CutPolicy::free(),
                              Exec exec = Exec::Parallel);

/// Geodesic segment: gamma(s) = cos(s) start + sin(s) tangent, s in [0, length].
struct GeodesicArc {
  Vec3 start;
  Vec3 tangent;
  double length = 0.0;

  Vec3 at(double s) const { return std::cos(s) * start + std::sin(s) * tangent; }
  Vec3 pole() const { return start.cross(tangent); }
  static GeodesicArc through(const Vec3& a, const Vec3& b);
};

struct Pancake {
  SphericalRegion region;
  GeodesicArc axis;
  double width = 0.0;  // max distance of region points to the axis
};

/// Pancake with its axis on the great circle of `target`: the arc covered by
/// the region and the largest distance of the region to that circle.
Pancake fit_pancake(const SphericalRegion& region, const GeodesicArc& target);

struct CutSequence {
  Pancake pancake;
  std::vector<double> widths;  // after 0, 1, ..., steps cuts
};

/// Cuts whose boundary circles cross the transverse geodesic at the target
/// midpoint at right angles, each placed at half the larger elevation extent
/// and keeping the side of the target.
CutSequence axis_cut_sequence(const SphericalRegion& region, const GeodesicArc& target, int steps);

/// Needle on a great-circle arc in R^dim with density C cos^k(s - t0).
struct SphericalNeedle {
  Eigen::VectorXd start;
  Eigen::VectorXd tangent;
  NeedleDensity density;  // on [0, length]

  double length() const { return density.interval.length; }
  Eigen::VectorXd at(double s) const { return std::cos(s) * start + std::sin(s) * tangent; }
};

SphericalNeedle make_spherical_needle(const Eigen::VectorXd& start, const Eigen::VectorXd& tangent, double length, int k,
                                      double t0);

inline constexpr double kPancakeMaxWidth = 0.05;

/// Needle on the pancake axis; t0 is the mass centroid of the pancake along
/// the axis, clamped into the positivity window. Throws PancakeTooThick.
SphericalNeedle extract_needle(const Pancake& p, int k);

struct NeedleProduct {
  double left = 0.0;   // integral of radial_K^n / n against the needle
  double right = 0.0;  // same for the polar
  double product = 0.0;
};

NeedleProduct needle_product(const BodyND& k, const SphericalNeedle& needle);

/// G1 = C - F1 and G2 = A - C F2 with F1 = radial_K^3/3, F2 = radial_{K polar}^3/3
/// on S^2; C and A exceed the means by the factor (1 + margin) so both
/// integrals are positive.
struct MahlerG {
  SphereFunction g1, g2;
  double c = 0.0, a = 0.0;
};
MahlerG mahler_g(const BodyND& k, double margin = 0.1);

}  // namespace mahler
