#include "mahler/geometry2d.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "mahler/errors.hpp"
#include "mahler/numeric.hpp"
#include "mahler/rng.hpp"

namespace mahler {
namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_coordinate(std::span<const Vec2> pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return s;
}

// Turn at b is strictly left (counterclockwise) relative to edge lengths.
bool strictly_left(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 e1 = b - a;
  const Vec2 e2 = c - b;
  return cross(e1, e2) > kGeomEps * norm(e1) * norm(e2);
}

// Andrew's monotone chain; drops collinear and duplicate points.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && !strictly_left(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && !strictly_left(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Removes vertex pairs (i, i+m) whose turn is not strictly convex.
std::vector<Vec2> prune_symmetric(std::vector<Vec2> v) {
  bool changed = true;
  while (changed && v.size() >= 4) {
    changed = false;
    const std::size_t n = v.size();
    const std::size_t m = n / 2;
    for (std::size_t i = 0; i < m; ++i) {
      if (!strictly_left(v[(i + n - 1) % n], v[i], v[(i + 1) % n])) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i + m));
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return v;
}

double polygon_area(std::span<const Vec2> v) {
  CompensatedSum s;
  for (std::size_t i = 0; i < v.size(); ++i) s.add(cross(v[i], v[(i + 1) % v.size()]));
  return 0.5 * s.value();
}

}  // namespace

double angle_of(Vec2 v) { return wrap_angle(std::atan2(v.y, v.x), 2.0 * kPi); }

SymmetricPolygon2 SymmetricPolygon2::from_symmetric_vertices(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 4 || n % 2 != 0) fail(ErrorKind::DegenerateBody, "need an even number (>= 4) of vertices");
  const std::size_t m = n / 2;
  const double scale = max_abs_coordinate(vertices);
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorKind::DegenerateBody, "vertices are zero or not finite");
  for (std::size_t i = 0; i < m; ++i) {
    if (norm(vertices[i] + vertices[i + m]) > 1e-9 * scale)
      fail(ErrorKind::DegenerateBody, "vertex list is not origin-symmetric");
    vertices[i + m] = -vertices[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!strictly_left(vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n]))
      fail(ErrorKind::DegenerateBody, "vertex " + std::to_string(i) + " is not in strictly convex position");
  }
  SymmetricPolygon2 p;
  p.facets_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = vertices[(i + 1) % n] - vertices[i];
    const Vec2 normal{e.y, -e.x};
    const double offset = dot(normal, vertices[i]);
    if (!(offset > 0.0)) fail(ErrorKind::DegenerateBody, "origin is not interior");
    p.facets_[i] = normal * (1.0 / offset);
  }
  for (std::size_t i = 0; i < m; ++i) p.facets_[i + m] = -p.facets_[i];
  p.vertices_ = std::move(vertices);
  return p;
}

SymmetricPolygon2 make_polygon(std::span<const Vec2> points) {
  if (points.empty()) fail(ErrorKind::DegenerateBody, "no points");
  std::vector<Vec2> all;
  all.reserve(2 * points.size());
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(ErrorKind::InvalidArgument, "non-finite coordinate");
    all.push_back(p);
    all.push_back(-p);
  }
  const auto hull = convex_hull(std::move(all));
  if (hull.size() < 3 || polygon_area(hull) <= 1e-24 * std::pow(max_abs_coordinate(hull), 2))
    fail(ErrorKind::DegenerateBody, "hull has empty interior");

  // Keep the half of the hull in [a0, a0 + pi) and mirror it so the pairing is exact.
  std::vector<std::pair<double, Vec2>> by_angle;
  for (const auto& v : hull) by_angle.emplace_back(angle_of(v), v);
  std::sort(by_angle.begin(), by_angle.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const double a0 = by_angle.front().first;
  std::vector<Vec2> half;
  for (const auto& [a, v] : by_angle)
    if (a - a0 < kPi - 1e-13) half.push_back(v);
  std::vector<Vec2> full(half);
  for (const auto& v : half) full.push_back(-v);
  full = prune_symmetric(std::move(full));
  return SymmetricPolygon2::from_symmetric_vertices(std::move(full));
}

SymmetricPolygon2 polar(const SymmetricPolygon2& p) {
  const auto f = p.facets();
  // Nearly parallel neighbouring edges give nearly coincident polar vertices;
  // dropping them moves the polar by at most the length of the short edge.
  return SymmetricPolygon2::from_symmetric_vertices(prune_symmetric({f.begin(), f.end()}));
}

double radial(const SymmetricPolygon2& p, double t) {
  const Vec2 u = unit(t);
  double h = 0.0;
  for (const auto& a : p.facets()) h = std::max(h, dot(a, u));
  return 1.0 / h;
}

double support(const SymmetricPolygon2& p, double t) {
  const Vec2 u = unit(t);
  double h = 0.0;
  for (const auto& v : p.vertices()) h = std::max(h, dot(v, u));
  return h;
}

double area(const SymmetricPolygon2& p) { return polygon_area(p.vertices()); }

double inradius(const SymmetricPolygon2& p) {
  double worst = 0.0;
  for (const auto& a : p.facets()) worst = std::max(worst, norm(a));
  return 1.0 / worst;
}

double circumradius(const SymmetricPolygon2& p) {
  double r = 0.0;
  for (const auto& v : p.vertices()) r = std::max(r, norm(v));
  return r;
}

bool contains_shell(const SymmetricPolygon2& p, const ShellConstraint& shell) {
  return inradius(p) >= shell.r_inner - kGeomEps && circumradius(p) <= shell.r_outer + kGeomEps;
}

SymmetricPolygon2 rotate(const SymmetricPolygon2& p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<Vec2> v;
  v.reserve(p.size());
  for (const auto& q : p.vertices()) v.push_back({c * q.x - s * q.y, s * q.x + c * q.y});
  return SymmetricPolygon2::from_symmetric_vertices(std::move(v));
}

SymmetricPolygon2 scale(const SymmetricPolygon2& p, double factor) {
  require(factor > 0.0 && std::isfinite(factor), "scale: factor must be positive");
  std::vector<Vec2> v;
  v.reserve(p.size());
  for (const auto& q : p.vertices()) v.push_back(q * factor);
  return SymmetricPolygon2::from_symmetric_vertices(std::move(v));
}

SymmetricPolygon2 steiner_symmetrize(const SymmetricPolygon2& p, double axis_angle) {
  // Work in a frame where the axis is the x-axis; chords are vertical.
  const double c = std::cos(axis_angle), s = std::sin(axis_angle);
  std::vector<Vec2> v;
  v.reserve(p.size());
  for (const auto& q : p.vertices()) v.push_back({c * q.x + s * q.y, -s * q.x + c * q.y});

  const double tol = 1e-13 * max_abs_coordinate(v);
  std::vector<double> xs;
  for (const auto& q : v) xs.push_back(q.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [tol](double a, double b) { return b - a <= tol; }), xs.end());

  const std::size_t n = v.size();
  std::vector<Vec2> pts;
  for (double x : xs) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = v[i], b = v[(i + 1) % n];
      if (x < std::min(a.x, b.x) - tol || x > std::max(a.x, b.x) + tol) continue;
      if (std::abs(b.x - a.x) <= tol) {
        lo = std::min({lo, a.y, b.y});
        hi = std::max({hi, a.y, b.y});
      } else {
        const double lambda = std::clamp((x - a.x) / (b.x - a.x), 0.0, 1.0);
        const double y = a.y + lambda * (b.y - a.y);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    // Chords below the tolerance are points; keeping them as rounding-sized
    // edges breaks strict convexity once the result is rotated back.
    double half_chord = 0.5 * std::max(0.0, hi - lo);
    if (half_chord <= tol) half_chord = 0.0;
    pts.push_back({x, half_chord});
    if (half_chord > 0.0) pts.push_back({x, -half_chord});
  }
  const auto sym = make_polygon(pts);
  return std::abs(axis_angle) == 0.0 ? sym : rotate(sym, axis_angle);
}

SymmetricPolygon2 unconditionalize(const SymmetricPolygon2& p) {
  return steiner_symmetrize(steiner_symmetrize(p, 0.0), kPi / 2);
}

double hausdorff(const SymmetricPolygon2& p, const SymmetricPolygon2& q) {
  auto gap = [&](double t) { return std::abs(support(p, t) - support(q, t)); };
  double d = 0.0;
  for (const auto& a : p.facets()) d = std::max(d, gap(angle_of(a)));
  for (const auto& a : q.facets()) d = std::max(d, gap(angle_of(a)));
  constexpr int kGrid = 2048;
  for (int i = 0; i < kGrid; ++i) d = std::max(d, gap(2.0 * kPi * i / kGrid));
  return d;
}

bool is_unconditional(const SymmetricPolygon2& p, double tol) {
  std::vector<Vec2> mirrored;
  for (const auto& v : p.vertices()) mirrored.push_back({v.x, -v.y});
  const auto reflected = make_polygon(mirrored);
  // Reflection across x composed with the central symmetry is reflection across y.
  return hausdorff(p, reflected) <= tol;
}

SymmetricPolygon2 regular_polygon(int count, double circumradius, double phase) {
  require(count >= 4 && count % 2 == 0, "regular_polygon: count must be even and >= 4");
  std::vector<Vec2> pts;
  for (int i = 0; i < count / 2; ++i) pts.push_back(unit(phase + 2.0 * kPi * i / count) * circumradius);
  return make_polygon(pts);
}

SymmetricPolygon2 circle_polygon(int count) { return regular_polygon(count, 1.0 / std::cos(kPi / count)); }

SymmetricPolygon2 random_shell_body(int m, const ShellConstraint& shell, std::uint64_t seed) {
  require(m >= 2, "random_shell_body: m must be >= 2");
  require(shell.r_inner > 0 && shell.r_inner <= shell.r_outer, "random_shell_body: invalid shell");
  constexpr int kAttempts = 1000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    CounterRng rng(seed, static_cast<std::uint64_t>(attempt));
    const double spread = rng.uniform(0.0, 0.6);
    std::vector<Vec2> dual_points;
    for (int k = 0; k < m; ++k) {
      const double phi = (k + rng.uniform()) * kPi / m;
      const double h = 1.0 + spread * rng.uniform();
      dual_points.push_back(unit(phi) * (1.0 / h));
    }
    try {
      // {x : |x.u_k| <= h_k} is the polar of the hull of the points u_k / h_k.
      auto body = polar(make_polygon(dual_points));
      body = scale(body, shell.r_inner / inradius(body));
      if (contains_shell(body, shell)) return body;
    } catch (const Error&) {
      // Degenerate draw; try the next stream.
    }
  }
  fail(ErrorKind::GenerationFailed, "no shell body after " + std::to_string(kAttempts) + " attempts");
}

}  // namespace mahler
