#include "mahler/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mahler/errors.hpp"
#include "mahler/measure2d.hpp"
#include "mahler/rng.hpp"

namespace mahler {
namespace {

constexpr double kPi = std::numbers::pi;

// Boundary of P cap {x, y >= 0} from (r0, 0) to (0, r1), counterclockwise.
std::vector<Vec2> quadrant_chain(const SymmetricPolygon2& p) {
  std::vector<Vec2> inner;
  for (const Vec2& v : p.vertices())
    if (v.x > kGeomEps && v.y > kGeomEps) inner.push_back(v);
  std::sort(inner.begin(), inner.end(), [](Vec2 a, Vec2 b) { return angle_of(a) < angle_of(b); });
  std::vector<Vec2> chain{{radial(p, 0.0), 0.0}};
  chain.insert(chain.end(), inner.begin(), inner.end());
  chain.push_back({0.0, radial(p, kPi / 2)});
  return chain;
}

bool is_small_integer(double m) { return m >= 1.0 && m <= 64.0 && std::abs(m - std::round(m)) < 1e-12; }

double binomial(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

// Integral of x^p y^q over the triangle (0, a, b): with x = s a + t b the
// simplex moments are i! j! / (i + j + 2)!.
double triangle_monomial(Vec2 a, Vec2 b, int p, int q) {
  const double jac = std::abs(cross(a, b));
  CompensatedSum s;
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j <= q; ++j) {
      const int alpha = i + j, beta = p + q - i - j;
      const double simplex = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 3.0));
      s.add(binomial(p, i) * binomial(q, j) * std::pow(a.x, i) * std::pow(b.x, p - i) * std::pow(a.y, j) *
            std::pow(b.y, q - j) * simplex);
    }
  }
  return jac * s.value();
}

double mu2(const SymmetricPolygon2& p, int n) { return full_measure(p, make_measure(n, 0.0)); }

template <class Body, class Row>
std::vector<InequalityRow> run_batch(int count, std::uint64_t seed, Exec exec, const Body& body_of, const Row& row_of) {
  require(count >= 0, "batch: count must be >= 0");
  std::vector<InequalityRow> rows(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (int i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const std::uint64_t s = splitmix64(seed + static_cast<std::uint64_t>(i));
      rows[idx] = row_of(body_of(s));
      rows[idx].seed = s;
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace

double quadrant_moment(const SymmetricPolygon2& p, const MomentVector& m) {
  require(m[0] > 0 && m[1] > 0, "quadrant_moment: moments must be positive");
  if (!is_small_integer(m[0]) || !is_small_integer(m[1])) return quadrant_moment_polar(p, m);
  const int px = static_cast<int>(std::round(m[0])) - 1, qy = static_cast<int>(std::round(m[1])) - 1;
  const auto chain = quadrant_chain(p);
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) s.add(triangle_monomial(chain[i], chain[i + 1], px, qy));
  return s.value();
}

double quadrant_moment_polar(const SymmetricPolygon2& p, const MomentVector& m) {
  require(m[0] > 0 && m[1] > 0, "quadrant_moment: moments must be positive");
  const double px = m[0] - 1.0, qy = m[1] - 1.0, e = m[0] + m[1];
  const auto chain = quadrant_chain(p);
  boost::math::quadrature::tanh_sinh<double> integrator;
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const double t0 = i == 0 ? 0.0 : angle_of(chain[i]);
    const double t1 = i + 2 == chain.size() ? kPi / 2 : angle_of(chain[i + 1]);
    // On this piece the boundary is the line through chain[i], chain[i+1].
    const Vec2 d = chain[i + 1] - chain[i];
    const Vec2 normal{d.y, -d.x};
    const double h = dot(normal, chain[i]);
    auto f = [&](double t) {
      const double c = std::cos(t), sn = std::sin(t);
      const double rho = h / (normal.x * c + normal.y * sn);
      return std::pow(c, px) * std::pow(sn, qy) * std::pow(rho, e) / e;
    };
    s.add(integrator.integrate(f, t0, t1));
  }
  return s.value();
}

SaintRaymondReport saint_raymond_check(const SymmetricPolygon2& p, const MomentVector& m) {
  if (!is_unconditional(p, 1e-9)) fail(ErrorKind::NotUnconditional, "body is not invariant under both axis reflections");
  SaintRaymondReport r;
  r.lhs = quadrant_moment(p, m) * quadrant_moment(polar(p), m);
  r.rhs = std::tgamma(m[0]) / m[0] * std::tgamma(m[1]) / m[1] / std::tgamma(m[0] + m[1] + 1.0);
  r.pass = r.lhs >= r.rhs - 1e-9;
  r.statement = "int_{K+} x^{m-1} dx * int_{K+ polar} x^{m-1} dx >= prod Gamma(m_i)/m_i / Gamma(|m| + 1)";
  return r;
}

FradReport frad_explore(const SymmetricPolygon2& p, int n) {
  require(n >= 4, "frad_explore: n must be >= 4");
  FradReport r;
  r.product = mu2(p, n) * mu2(polar(p), n);
  r.bound = 1.0 / n;
  r.margin = r.product - r.bound;
  r.statement = "mu_2(K) mu_2(K polar) >= 1/n (exploratory)";
  return r;
}

ShadowReport shadow_probe(const SymmetricPolygon2& p, int n) {
  require(n >= 4, "shadow_probe: n must be >= 4");
  const SymmetricPolygon2 u = unconditionalize(p);
  ShadowReport r;
  r.mu2_p = mu2(p, n);
  r.mu2_u = mu2(u, n);
  r.mu2_polar_p = mu2(polar(p), n);
  r.mu2_polar_u = mu2(polar(u), n);
  const double d = r.mu2_polar_p - r.mu2_polar_u;
  r.sign = std::abs(d) <= 1e-9 * std::max(r.mu2_polar_p, r.mu2_polar_u) ? 0 : (d > 0 ? 1 : -1);
  r.primal_holds = r.mu2_p >= r.mu2_u - 1e-9;
  return r;
}

ChainReport closing_chain(int n) {
  require(n >= 4, "closing_chain: n must be >= 4");
  ChainReport r;
  r.n = n;
  r.c_quadrature = integrate_adaptive([n](double t) { return std::pow(std::cos(t), n - 2); }, -kPi / 2, kPi / 2, 1e-15);
  r.c_closed = std::sqrt(kPi) * std::tgamma((n - 1) / 2.0) / std::tgamma(n / 2.0);
  const double area = sphere_area(n);
  r.chain_value = area * area / ((n - 1) * r.c_closed * r.c_closed);
  const double g = std::tgamma((n - 1) / 2.0);
  r.printed_value = 4.0 * std::pow(kPi, n - 1) / ((n - 1) * g * g);
  r.conjecture_value = std::pow(4.0, n) / std::tgamma(n + 1.0);
  const bool routes = std::abs(r.c_quadrature - r.c_closed) <= 1e-12 * r.c_closed;
  const bool identity = std::abs(r.chain_value - r.printed_value) <= 1e-10 * r.printed_value;
  r.pass = routes && identity && r.chain_value > r.conjecture_value;
  r.statement = "vol(S^{n-1})^2 / ((n-1) C(n)^2) = 4 pi^{n-1} / ((n-1) Gamma((n-1)/2)^2) > 4^n / Gamma(n+1)";
  return r;
}

SymmetricPolygon2 random_polygon(std::uint64_t seed) {
  CounterRng rng(seed, 0x9a11);
  const int m = rng.uniform_int(2, 9);
  const SymmetricPolygon2 body = random_shell_body(m, {1.0, 3.0}, seed);
  return rotate(body, rng.uniform(0.0, kPi));
}

SymmetricPolygon2 random_unconditional_polygon(std::uint64_t seed) { return unconditionalize(random_polygon(seed)); }

std::vector<InequalityRow> saint_raymond_batch(int count, std::uint64_t seed, const MomentVector& m, Exec exec) {
  return run_batch(count, seed, exec, random_unconditional_polygon, [&](const SymmetricPolygon2& p) {
    const auto r = saint_raymond_check(p, m);
    InequalityRow row;
    row.product = r.lhs;
    row.bound = r.rhs;
    row.margin = r.lhs - r.rhs;
    row.sign = row.margin > 0 ? 1 : (row.margin < 0 ? -1 : 0);
    row.pass = r.pass;
    return row;
  });
}

std::vector<InequalityRow> frad_batch(int count, int n, std::uint64_t seed, Exec exec) {
  require(n >= 4, "frad_batch: n must be >= 4");
  return run_batch(count, seed, exec, random_polygon, [n](const SymmetricPolygon2& p) {
    const auto r = frad_explore(p, n);
    InequalityRow row;
    row.product = r.product;
    row.bound = r.bound;
    row.margin = r.margin;
    row.sign = r.margin > 0 ? 1 : (r.margin < 0 ? -1 : 0);
    row.pass = r.margin >= 0;
    return row;
  });
}

std::vector<InequalityRow> shadow_batch(int count, int n, std::uint64_t seed, Exec exec) {
  require(n >= 4, "shadow_batch: n must be >= 4");
  return run_batch(count, seed, exec, random_polygon, [n](const SymmetricPolygon2& p) {
    const auto r = shadow_probe(p, n);
    InequalityRow row;
    row.product = r.mu2_polar_p;
    row.bound = r.mu2_polar_u;
    row.margin = r.mu2_polar_p - r.mu2_polar_u;
    row.sign = r.sign;
    row.pass = r.primal_holds;
    return row;
  });
}

std::string rows_to_csv(const std::vector<InequalityRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "seed,product,bound,margin,sign,pass\n";
  for (const auto& r : rows)
    out << r.seed << ',' << r.product << ',' << r.bound << ',' << r.margin << ',' << r.sign << ',' << (r.pass ? 1 : 0)
        << '\n';
  return out.str();
}

}  // namespace mahler
