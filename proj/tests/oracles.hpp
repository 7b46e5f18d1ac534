#pragma once

// Independent reference computations used only by the tests. None of them
// shares code with the library routines they check.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "mahler/geometry2d.hpp"
#include "mahler/rng.hpp"

namespace oracle {

using mahler::Vec2;

inline double cross2(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Boundary hit of the ray at angle t: the nearest intersection with any edge.
inline Vec2 boundary_point(const std::vector<Vec2>& poly, double t) {
  const Vec2 u{std::cos(t), std::sin(t)};
  double best = INFINITY;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    const Vec2 e{b.x - a.x, b.y - a.y};
    const double den = cross2(u, e);
    if (std::abs(den) < 1e-300) continue;
    const double r = cross2(a, e) / den;
    const double s = cross2(a, u) / den;
    if (r > 0 && s >= -1e-12 && s <= 1 + 1e-12) best = std::min(best, r);
  }
  return {best * u.x, best * u.y};
}

// Integral of L^p over a triangle for linear L with vertex values l0, l1, l2:
// 2 |T| p! / (p+2)! times the complete homogeneous sum of degree p.
inline double triangle_linear_power(Vec2 a, Vec2 b, Vec2 c, double l0, double l1, double l2, int p) {
  const double area = 0.5 * std::abs(cross2({b.x - a.x, b.y - a.y}, {c.x - a.x, c.y - a.y}));
  double h = 0.0;
  for (int i = 0; i <= p; ++i)
    for (int j = 0; i + j <= p; ++j) h += std::pow(l0, i) * std::pow(l1, j) * std::pow(l2, p - i - j);
  return 2.0 * area * std::tgamma(p + 1.0) / std::tgamma(p + 3.0) * h;
}

// Clip a convex polygon to the half-plane s * (w . x) >= 0.
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 w, double s) {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
    const double fp = s * (w.x * p.x + w.y * p.y), fq = s * (w.x * q.x + w.y * q.y);
    if (fp >= 0) out.push_back(p);
    if ((fp >= 0) != (fq >= 0)) {
      const double t = fp / (fp - fq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

// Cartesian form of the cone measure: the polar density r^n |cos(t + theta)|^{n-1}
// dr dt equals |x cos(theta) - y sin(theta)|^{n-1} dx dy. The region (body cap
// cone over [a, a + len], len <= pi) is a fan of triangles from the origin; each
// is split along the zero line of the linear form and integrated exactly.
inline double cartesian_sector_measure(const mahler::SymmetricPolygon2& p, int n, double theta, double a, double len) {
  const std::vector<Vec2> poly(p.vertices().begin(), p.vertices().end());
  std::vector<Vec2> chain{boundary_point(poly, a)};
  std::vector<std::pair<double, Vec2>> inner;
  for (const Vec2& v : poly) {
    double t = std::atan2(v.y, v.x) - a;
    t = std::fmod(t, 2 * std::numbers::pi);
    if (t < 0) t += 2 * std::numbers::pi;
    if (t > 1e-12 && t < len - 1e-12) inner.emplace_back(t, v);
  }
  std::sort(inner.begin(), inner.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [t, v] : inner) chain.push_back(v);
  chain.push_back(boundary_point(poly, a + len));
  const Vec2 w{std::cos(theta), -std::sin(theta)};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const std::vector<Vec2> tri{{0, 0}, chain[i], chain[i + 1]};
    for (double s : {1.0, -1.0}) {
      const auto piece = clip_halfplane(tri, w, s);
      for (std::size_t k = 1; k + 1 < piece.size(); ++k) {
        auto l = [&](Vec2 x) { return s * (w.x * x.x + w.y * x.y); };
        total += triangle_linear_power(piece[0], piece[k], piece[k + 1], l(piece[0]), l(piece[k]), l(piece[k + 1]), n - 1);
      }
    }
  }
  return total;
}

// Uniform random point on S^{dim-1} by normalized Gaussians.
inline Eigen::VectorXd random_direction(int dim, mahler::CounterRng& rng) {
  Eigen::VectorXd u(dim);
  for (int i = 0; i < dim; ++i) u(i) = rng.normal();
  return u.normalized();
}

}  // namespace oracle
