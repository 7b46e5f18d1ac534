#pragma once

// Origin-symmetric convex bodies in R^n, their polars, sphere-sampled volume
// estimates and the Mahler-product bounds.

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "mahler/geometry2d.hpp"
#include "mahler/numeric.hpp"

namespace mahler {

/// Representations are stored as rows. Vertex and facet sets are closed under
/// negation; a facet row a describes the half-space a.x <= 1. An ellipsoid
/// body is the image L B of the unit ball.
class BodyND {
 public:
  static BodyND from_vertices(const Eigen::MatrixXd& vertices);
  static BodyND from_facets(const Eigen::MatrixXd& facets);
  /// Both representations of the same body; the caller guarantees they agree.
  static BodyND from_both(const Eigen::MatrixXd& vertices, const Eigen::MatrixXd& facets);
  static BodyND from_ellipsoid(const Eigen::MatrixXd& l);

  int dim() const { return dim_; }
  bool has_vertices() const { return vertices_.rows() > 0; }
  bool has_facets() const { return facets_.rows() > 0; }
  bool is_ellipsoid() const { return ellipsoid_.has_value(); }
  const Eigen::MatrixXd& vertices() const { return vertices_; }
  const Eigen::MatrixXd& facets() const { return facets_; }
  const Eigen::MatrixXd& ellipsoid() const { return *ellipsoid_; }

 private:
  BodyND() = default;
  int dim_ = 0;
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXd facets_;
  std::optional<Eigen::MatrixXd> ellipsoid_;
  Eigen::MatrixXd ellipsoid_inverse_;  // L^{-1}

  friend double radial_nd(const BodyND&, const Eigen::Ref<const Eigen::VectorXd>&);
  friend double support_nd(const BodyND&, const Eigen::Ref<const Eigen::VectorXd>&);
  friend BodyND polar_nd(const BodyND&);
};

BodyND cube(int n);
BodyND cross_polytope(int n);
BodyND ball(int n, double radius = 1.0);
/// Polytope {x : |a_i.x| <= r} with `count` random unit normals a_i; it
/// contains the ball of radius r.
BodyND tangent_ball_polytope(int n, int count, double radius, std::uint64_t seed);
/// conv(+-g_j) for `count` standard Gaussian points g_j.
BodyND random_symmetric_polytope(int n, int count, std::uint64_t seed);
/// Random matrix with condition number at most `max_condition`.
Eigen::MatrixXd random_linear_map(int n, double max_condition, std::uint64_t seed);
Eigen::MatrixXd random_rotation(int n, std::uint64_t seed);
/// Image T K.
BodyND transform(const BodyND& k, const Eigen::MatrixXd& t);
BodyND scale(const BodyND& k, double factor);

/// Swaps vertices and facets; the polar of L B is L^{-T} B.
BodyND polar_nd(const BodyND& k);
/// Length of the segment from the origin in direction u (u need not be unit;
/// the result is for u / |u| scaled by 1 / |u|). Throws UnboundedBody.
double radial_nd(const BodyND& k, const Eigen::Ref<const Eigen::VectorXd>& u);
double support_nd(const BodyND& k, const Eigen::Ref<const Eigen::VectorXd>& u);

/// Equal-weight directions on S^{n-1}: a randomly shifted Halton sequence
/// mapped through the normal quantile, plus the antipode of every point.
struct SphereSample {
  int dim = 0;
  Eigen::MatrixXd directions;  // dim x count, columns are unit vectors; column 2j+1 = -column 2j

  std::size_t size() const { return static_cast<std::size_t>(directions.cols()); }
  double weight() const { return 1.0 / static_cast<double>(size()); }
  static SphereSample halton(int dim, std::size_t count, std::uint64_t seed);
  /// Independent uniform directions without antithetic pairing.
  static SphereSample independent(int dim, std::size_t count, std::uint64_t seed);
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// vol_{n-1}(S^{n-1}) times the sample mean of radial^n / n. The standard error
/// is computed over antithetic pair means.
Estimate volume_radial_mc(const BodyND& k, const SphereSample& sample, Exec exec = Exec::Parallel);

struct MahlerEstimate {
  double value = 0.0;
  double se = 0.0;  // first-order propagation including the covariance term
  Estimate volume;
  Estimate polar_volume;
};

MahlerEstimate mahler_product(const BodyND& k, const SphereSample& sample, Exec exec = Exec::Parallel);

/// "cube" and "cross_polytope": 4^n / n!; "ball": vol(B_n)^2.
double exact_reference(const std::string& name, int n);

/// alpha * vol_{n-1}(S^{n-1})^2.
double beta_bound(int n, double alpha_value);
/// 4 pi^n / (n^{(n+4)/2} Gamma(n/2)^2).
double remark_bound(int n);

struct BoundReport {
  double product = 0.0;
  double se = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // signed distance from the bound in the passing direction
  bool pass = false;
  std::string statement;
};

/// Lower bound: product >= beta_bound(n, alpha_estimate) - 3 SE.
BoundReport verify_main(const BodyND& k, double alpha_estimate, const SphereSample& sample);
BoundReport verify_main(const MahlerEstimate& product, int n, double alpha_estimate);
/// Upper bound: product <= vol(B_n)^2 + 3 SE.
BoundReport santalo_check(const BodyND& k, const SphereSample& sample);
BoundReport santalo_check(const MahlerEstimate& product, int n);

struct JohnResult {
  BodyND body;
  Eigen::MatrixXd map;  // the applied linear map
  double gap = 0.0;     // max_i a_i^T (nM)^{-1} a_i - 1 at termination
  int iterations = 0;
};

/// Maps the maximal-volume inscribed ellipsoid to the unit ball. Needs facets
/// or an ellipsoid; throws NormalizationFailed otherwise or on non-convergence.
JohnResult john_normalize(const BodyND& k, double gap_tol = 1e-6, int max_iter = 200000);

struct PlaneSection {
  Eigen::MatrixXd frame;  // n x 2, orthonormal columns
  double discrepancy = 0.0;  // sup-norm gap between projection and section of the polar
  SymmetricPolygon2 section;  // K cap span(frame), in frame coordinates
};

/// Support-function gap between P_L(K polar) and (K polar) cap L on a
/// 360-direction grid.
double projection_section_gap(const BodyND& k, const Eigen::MatrixXd& frame);
/// K cap span(frame) in frame coordinates. Exact when K has facets or is an
/// ellipsoid; otherwise the hull of 360 radial samples.
SymmetricPolygon2 section_polygon(const BodyND& k, const Eigen::MatrixXd& frame);
/// Frame search: coordinate planes, then random frames refined by descent.
/// Throws PlaneSearchFailed (message carries the best gap) if tol is not met.
PlaneSection section_plane(const BodyND& k, std::uint64_t seed = 1, double tol = 1e-3, int budget = 400);

}  // namespace mahler
