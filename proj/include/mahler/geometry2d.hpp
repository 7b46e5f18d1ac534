#pragma once

// Origin-symmetric convex polygons in the plane: construction, polar duality,
// radial/support functions, shell membership and Steiner symmetrization.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mahler {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit(double t) { return {std::cos(t), std::sin(t)}; }
/// Polar angle in [0, 2 pi).
double angle_of(Vec2 v);

struct ShellConstraint {
  double r_inner = 1.0;
  double r_outer = 1.0;

  /// The class B(0,1) <= S <= B(0, sqrt(n+1)) used by the alpha functional.
  static ShellConstraint for_exponent(int n) { return {1.0, std::sqrt(n + 1.0)}; }
};

/// Origin-symmetric, strictly convex polygon with 2m counterclockwise vertices
/// and vertex[i + m] == -vertex[i]. Facet i is the edge vertex[i] -> vertex[i+1],
/// stored as the vector a with the edge on the line a.x = 1.
class SymmetricPolygon2 {
 public:
  /// Validates the invariants; throws DegenerateBody when they fail.
  static SymmetricPolygon2 from_symmetric_vertices(std::vector<Vec2> vertices);

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const Vec2> facets() const { return facets_; }
  /// The first m vertices; the rest are their negatives.
  std::span<const Vec2> half() const { return {vertices_.data(), vertices_.size() / 2}; }
  std::size_t size() const { return vertices_.size(); }
  std::size_t pairs() const { return vertices_.size() / 2; }

 private:
  SymmetricPolygon2() = default;
  std::vector<Vec2> vertices_;
  std::vector<Vec2> facets_;
};

/// Symmetrized convex hull of points and their negatives.
SymmetricPolygon2 make_polygon(std::span<const Vec2> points);

SymmetricPolygon2 polar(const SymmetricPolygon2& p);

/// max{r : r (cos t, sin t) in P}.
double radial(const SymmetricPolygon2& p, double t);
/// max over vertices of v . (cos t, sin t).
double support(const SymmetricPolygon2& p, double t);

double area(const SymmetricPolygon2& p);
double inradius(const SymmetricPolygon2& p);
double circumradius(const SymmetricPolygon2& p);

bool contains_shell(const SymmetricPolygon2& p, const ShellConstraint& shell);

SymmetricPolygon2 rotate(const SymmetricPolygon2& p, double angle);
SymmetricPolygon2 scale(const SymmetricPolygon2& p, double factor);

/// Steiner symmetral about the line through the origin at axis_angle. Computed
/// exactly from the piecewise-linear chord function.
SymmetricPolygon2 steiner_symmetrize(const SymmetricPolygon2& p, double axis_angle);
/// Steiner about the x-axis, then about the y-axis.
SymmetricPolygon2 unconditionalize(const SymmetricPolygon2& p);
bool is_unconditional(const SymmetricPolygon2& p, double tol = 1e-9);

/// Hausdorff distance, evaluated as the sup-norm of the support-function
/// difference over both facet-normal sets and a uniform direction grid.
double hausdorff(const SymmetricPolygon2& p, const SymmetricPolygon2& q);

SymmetricPolygon2 regular_polygon(int count, double circumradius, double phase = 0.0);
/// Regular polygon circumscribed about the unit circle (inradius exactly 1),
/// the polygonal stand-in for the disk.
SymmetricPolygon2 circle_polygon(int count = 256);

/// Random body of the shell class built from m support constraints; the result
/// is rescaled to inradius r_inner. Deterministic per seed.
SymmetricPolygon2 random_shell_body(int m, const ShellConstraint& shell, std::uint64_t seed);

}  // namespace mahler
