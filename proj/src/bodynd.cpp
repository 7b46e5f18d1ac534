#include "mahler/bodynd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "mahler/errors.hpp"
#include "mahler/lp.hpp"
#include "mahler/rng.hpp"

namespace mahler {
namespace {

constexpr double kPi = std::numbers::pi;

// Rows of m plus the negatives of rows whose negative is not already present.
// The first half of the result holds one representative per pair.
Eigen::MatrixXd close_under_negation(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  std::vector<Eigen::VectorXd> half;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::VectorXd row = m.row(i).transpose();
    require(row.allFinite(), "body: non-finite coordinates");
    require(row.norm() > 1e-300, "body: zero row");
    bool seen = false;
    for (const auto& h : half) {
      if ((h - row).cwiseAbs().maxCoeff() <= 1e-12 * scale || (h + row).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
        seen = true;
        break;
      }
    }
    if (!seen) half.push_back(row);
  }
  const auto k = static_cast<Eigen::Index>(half.size());
  Eigen::MatrixXd out(2 * k, m.cols());
  for (Eigen::Index i = 0; i < k; ++i) {
    out.row(i) = half[static_cast<std::size_t>(i)].transpose();
    out.row(i + k) = -half[static_cast<std::size_t>(i)].transpose();
  }
  return out;
}

void require_full_rank(const Eigen::MatrixXd& rows, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  lu.setThreshold(1e-12);
  if (lu.rank() < rows.cols()) fail(ErrorKind::DegenerateBody, std::string(what) + " do not span R^n");
}

Eigen::MatrixXd half_columns(const Eigen::MatrixXd& symmetric_rows) {
  return symmetric_rows.topRows(symmetric_rows.rows() / 2).transpose();
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  const Eigen::MatrixXd r = qr.matrixQR();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

Eigen::MatrixXd gaussian_matrix(int rows, int cols, CounterRng& rng) {
  Eigen::MatrixXd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.normal();
  return g;
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr std::array<std::uint64_t, 10> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
// Early Halton points in large bases are strongly correlated; skip them.
constexpr std::uint64_t kHaltonSkip = 1000;

struct PairMoments {
  double mean_p = 0.0, mean_q = 0.0;
  double var_p = 0.0, var_q = 0.0, cov = 0.0;  // of the pair means
  std::size_t pairs = 0;
};

PairMoments pair_moments(const std::vector<double>& p, const std::vector<double>& q, Exec exec) {
  PairMoments m;
  m.pairs = p.size() / 2;
  const auto pm = [&](std::size_t j) { return 0.5 * (p[2 * j] + p[2 * j + 1]); };
  const auto qm = [&](std::size_t j) { return 0.5 * (q[2 * j] + q[2 * j + 1]); };
  const double count = static_cast<double>(m.pairs);
  m.mean_p = chunked_sum(m.pairs, pm, exec) / count;
  m.mean_q = chunked_sum(m.pairs, qm, exec) / count;
  if (m.pairs < 2) return m;
  m.var_p = chunked_sum(m.pairs, [&](std::size_t j) { const double d = pm(j) - m.mean_p; return d * d; }, exec) / (count - 1);
  m.var_q = chunked_sum(m.pairs, [&](std::size_t j) { const double d = qm(j) - m.mean_q; return d * d; }, exec) / (count - 1);
  m.cov = chunked_sum(m.pairs, [&](std::size_t j) { return (pm(j) - m.mean_p) * (qm(j) - m.mean_q); }, exec) / (count - 1);
  return m;
}

std::vector<double> radial_powers(const BodyND& k, const SphereSample& sample, Exec exec) {
  require(sample.dim == k.dim(), "sample dimension does not match the body");
  require(sample.size() >= 2 && sample.size() % 2 == 0, "sample must hold antithetic pairs");
  const int n = k.dim();
  std::vector<double> out(sample.size());
  const long count = static_cast<long>(sample.size());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = std::pow(radial_nd(k, sample.directions.col(i)), n) / n;
  return out;
}

}  // namespace

BodyND BodyND::from_vertices(const Eigen::MatrixXd& vertices) {
  require(vertices.cols() >= 2, "body: dimension must be >= 2");
  BodyND b;
  b.dim_ = static_cast<int>(vertices.cols());
  b.vertices_ = close_under_negation(vertices);
  require_full_rank(b.vertices_, "vertices");
  return b;
}

BodyND BodyND::from_facets(const Eigen::MatrixXd& facets) {
  require(facets.cols() >= 2, "body: dimension must be >= 2");
  BodyND b;
  b.dim_ = static_cast<int>(facets.cols());
  b.facets_ = close_under_negation(facets);
  require_full_rank(b.facets_, "facet normals");
  return b;
}

BodyND BodyND::from_both(const Eigen::MatrixXd& vertices, const Eigen::MatrixXd& facets) {
  require(vertices.cols() == facets.cols(), "body: representation dimensions differ");
  BodyND b = from_vertices(vertices);
  b.facets_ = close_under_negation(facets);
  require_full_rank(b.facets_, "facet normals");
  return b;
}

BodyND BodyND::from_ellipsoid(const Eigen::MatrixXd& l) {
  require(l.rows() == l.cols() && l.rows() >= 2, "ellipsoid: map must be square");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(l);
  if (!lu.isInvertible()) fail(ErrorKind::DegenerateBody, "ellipsoid map is singular");
  BodyND b;
  b.dim_ = static_cast<int>(l.rows());
  b.ellipsoid_ = l;
  b.ellipsoid_inverse_ = lu.inverse();
  return b;
}

BodyND cube(int n) {
  require(n >= 2 && n <= 16, "cube: n must lie in [2, 16]");
  const Eigen::MatrixXd facets = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd vertices(1 << (n - 1), n);
  // Sign patterns with a fixed last coordinate; negation closure adds the rest.
  for (int s = 0; s < (1 << (n - 1)); ++s) {
    for (int i = 0; i < n - 1; ++i) vertices(s, i) = (s >> i) & 1 ? -1.0 : 1.0;
    vertices(s, n - 1) = 1.0;
  }
  return BodyND::from_both(vertices, facets);
}

BodyND cross_polytope(int n) { return polar_nd(cube(n)); }

BodyND ball(int n, double radius) {
  require(n >= 2 && radius > 0.0, "ball: need n >= 2 and radius > 0");
  return BodyND::from_ellipsoid(radius * Eigen::MatrixXd::Identity(n, n));
}

BodyND tangent_ball_polytope(int n, int count, double radius, std::uint64_t seed) {
  require(n >= 2 && count >= n && radius > 0.0, "tangent_ball_polytope: invalid arguments");
  CounterRng rng(seed, 0x7a9e);
  Eigen::MatrixXd a = gaussian_matrix(count, n, rng);
  for (int i = 0; i < count; ++i) a.row(i) /= a.row(i).norm() * radius;
  return BodyND::from_facets(a);
}

BodyND random_symmetric_polytope(int n, int count, std::uint64_t seed) {
  require(n >= 2 && count >= n, "random_symmetric_polytope: need count >= n");
  CounterRng rng(seed, 0x9017);
  return BodyND::from_vertices(gaussian_matrix(count, n, rng));
}

Eigen::MatrixXd random_rotation(int n, std::uint64_t seed) {
  CounterRng rng(seed, 0x4071);
  return orthonormalize(gaussian_matrix(n, n, rng));
}

Eigen::MatrixXd random_linear_map(int n, double max_condition, std::uint64_t seed) {
  require(max_condition >= 1.0, "random_linear_map: condition bound must be >= 1");
  CounterRng rng(seed, 0x11aa);
  const Eigen::MatrixXd q1 = orthonormalize(gaussian_matrix(n, n, rng));
  const Eigen::MatrixXd q2 = orthonormalize(gaussian_matrix(n, n, rng));
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = std::exp(rng.uniform() * std::log(max_condition));
  return q1 * s.asDiagonal() * q2;
}

BodyND transform(const BodyND& k, const Eigen::MatrixXd& t) {
  require(t.rows() == k.dim() && t.cols() == k.dim(), "transform: map has the wrong size");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(t);
  if (!lu.isInvertible()) fail(ErrorKind::DegenerateBody, "transform: map is singular");
  if (k.is_ellipsoid()) return BodyND::from_ellipsoid(t * k.ellipsoid());
  const Eigen::MatrixXd t_inv = lu.inverse();
  if (k.has_vertices() && k.has_facets()) return BodyND::from_both(k.vertices() * t.transpose(), k.facets() * t_inv);
  if (k.has_vertices()) return BodyND::from_vertices(k.vertices() * t.transpose());
  return BodyND::from_facets(k.facets() * t_inv);
}

BodyND scale(const BodyND& k, double factor) {
  require(factor > 0.0, "scale: factor must be positive");
  return transform(k, factor * Eigen::MatrixXd::Identity(k.dim(), k.dim()));
}

BodyND polar_nd(const BodyND& k) {
  if (k.is_ellipsoid()) return BodyND::from_ellipsoid(k.ellipsoid_inverse_.transpose());
  BodyND p;
  p.dim_ = k.dim_;
  p.vertices_ = k.facets_;
  p.facets_ = k.vertices_;
  return p;
}

double radial_nd(const BodyND& k, const Eigen::Ref<const Eigen::VectorXd>& u) {
  double gauge = 0.0;
  if (k.ellipsoid_) {
    gauge = (k.ellipsoid_inverse_ * u).norm();
  } else if (k.has_facets()) {
    gauge = (k.facets_ * u).cwiseAbs().maxCoeff();
  } else {
    gauge = symmetric_hull_gauge(half_columns(k.vertices_), u);
  }
  if (!(gauge > 0.0) || !std::isfinite(gauge)) fail(ErrorKind::UnboundedBody, "radial_nd: body is unbounded in this direction");
  return 1.0 / gauge;
}

double support_nd(const BodyND& k, const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (k.ellipsoid_) return (k.ellipsoid_->transpose() * u).norm();
  if (k.has_vertices()) return (k.vertices_ * u).cwiseAbs().maxCoeff();
  const double h = symmetric_hull_gauge(half_columns(k.facets_), u);
  if (!std::isfinite(h)) fail(ErrorKind::UnboundedBody, "support_nd: body is unbounded in this direction");
  return h;
}

SphereSample SphereSample::halton(int dim, std::size_t count, std::uint64_t seed) {
  require(dim >= 2 && dim <= static_cast<int>(kPrimes.size()), "SphereSample: dimension must lie in [2, 10]");
  require(count >= 2 && count % 2 == 0, "SphereSample: count must be even and >= 2");
  CounterRng rng(seed, 0x5a11);
  std::vector<double> shift(static_cast<std::size_t>(dim));
  for (auto& s : shift) s = rng.uniform();
  SphereSample out;
  out.dim = dim;
  out.directions.resize(dim, static_cast<Eigen::Index>(count));
  const boost::math::normal_distribution<double> normal;
  const long pairs = static_cast<long>(count / 2);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < pairs; ++j) {
    Eigen::VectorXd g(dim);
    for (int d = 0; d < dim; ++d) {
      double p = radical_inverse(kHaltonSkip + static_cast<std::uint64_t>(j), kPrimes[static_cast<std::size_t>(d)]) +
                 shift[static_cast<std::size_t>(d)];
      p -= std::floor(p);
      p = std::clamp(p, 1e-15, 1.0 - 1e-15);
      g(d) = boost::math::quantile(normal, p);
    }
    g.normalize();
    out.directions.col(2 * j) = g;
    out.directions.col(2 * j + 1) = -g;
  }
  return out;
}

SphereSample SphereSample::independent(int dim, std::size_t count, std::uint64_t seed) {
  require(dim >= 2 && count >= 2 && count % 2 == 0, "SphereSample: invalid size");
  CounterRng rng(seed, 0x1d1d);
  SphereSample out;
  out.dim = dim;
  out.directions = gaussian_matrix(dim, static_cast<int>(count), rng);
  out.directions.colwise().normalize();
  return out;
}

Estimate volume_radial_mc(const BodyND& k, const SphereSample& sample, Exec exec) {
  const std::vector<double> f = radial_powers(k, sample, exec);
  const PairMoments m = pair_moments(f, f, exec);
  const double area = sphere_area(k.dim());
  return {area * m.mean_p, area * std::sqrt(m.var_p / static_cast<double>(m.pairs))};
}

MahlerEstimate mahler_product(const BodyND& k, const SphereSample& sample, Exec exec) {
  const std::vector<double> f = radial_powers(k, sample, exec);
  const std::vector<double> g = radial_powers(polar_nd(k), sample, exec);
  const PairMoments m = pair_moments(f, g, exec);
  const double area = sphere_area(k.dim());
  const double j = static_cast<double>(m.pairs);
  MahlerEstimate out;
  out.volume = {area * m.mean_p, area * std::sqrt(m.var_p / j)};
  out.polar_volume = {area * m.mean_q, area * std::sqrt(m.var_q / j)};
  out.value = out.volume.value * out.polar_volume.value;
  const double var = area * area * area * area *
                     (m.mean_q * m.mean_q * m.var_p + m.mean_p * m.mean_p * m.var_q + 2.0 * m.mean_p * m.mean_q * m.cov) / j;
  out.se = std::sqrt(std::max(0.0, var));
  return out;
}

double exact_reference(const std::string& name, int n) {
  require(n >= 2, "exact_reference: n must be >= 2");
  if (name == "cube" || name == "cross_polytope") return std::pow(4.0, n) / std::tgamma(n + 1.0);
  if (name == "ball") return ball_volume(n) * ball_volume(n);
  fail(ErrorKind::UnknownReference, "no exact Mahler value for '" + name + "'");
}

double beta_bound(int n, double alpha_value) {
  require(n >= 2 && alpha_value > 0.0, "beta_bound: need n >= 2 and alpha > 0");
  const double s = sphere_area(n);
  return alpha_value * s * s;
}

double remark_bound(int n) {
  require(n >= 2, "remark_bound: n must be >= 2");
  const double g = std::tgamma(0.5 * n);
  return 4.0 * std::pow(kPi, n) / (std::pow(n, 0.5 * (n + 4)) * g * g);
}

BoundReport verify_main(const BodyND& k, double alpha_estimate, const SphereSample& sample) {
  return verify_main(mahler_product(k, sample), k.dim(), alpha_estimate);
}

BoundReport verify_main(const MahlerEstimate& p, int n, double alpha_estimate) {
  BoundReport r;
  r.product = p.value;
  r.se = p.se;
  r.bound = beta_bound(n, alpha_estimate);
  r.margin = p.value - r.bound;
  r.pass = p.value >= r.bound - 3.0 * p.se;
  r.statement = "vol(K) vol(K polar) >= alpha(n-1) vol_{n-1}(S^{n-1})^2";
  return r;
}

BoundReport santalo_check(const BodyND& k, const SphereSample& sample) {
  return santalo_check(mahler_product(k, sample), k.dim());
}

BoundReport santalo_check(const MahlerEstimate& p, int n) {
  BoundReport r;
  r.product = p.value;
  r.se = p.se;
  r.bound = exact_reference("ball", n);
  r.margin = r.bound - p.value;
  // Rounding floor so the exact ball (zero sample variance) is compared fairly.
  const double tol = std::max(3.0 * p.se, 1e-12 * r.bound);
  r.pass = p.value <= r.bound + tol;
  r.statement = "vol(K) vol(K polar) <= vol(B_n)^2";
  return r;
}

JohnResult john_normalize(const BodyND& k, double gap_tol, int max_iter) {
  const int n = k.dim();
  if (k.is_ellipsoid()) {
    Eigen::MatrixXd map = k.ellipsoid().inverse();
    return {ball(n), map, 0.0, 0};
  }
  if (!k.has_facets()) fail(ErrorKind::NormalizationFailed, "john_normalize needs a facet description");
  // Minimum-volume centred ellipsoid of the facet vectors (Todd-Yildirim
  // with away steps); its polar is the maximal inscribed ellipsoid of K.
  const Eigen::MatrixXd a = half_columns(k.facets());
  const Eigen::Index m = a.cols();
  Eigen::VectorXd u = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  Eigen::VectorXd kappa(m);
  double gap = INFINITY;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const Eigen::MatrixXd mm = a * u.asDiagonal() * a.transpose();
    const Eigen::LLT<Eigen::MatrixXd> llt(mm);
    if (llt.info() != Eigen::Success) fail(ErrorKind::NormalizationFailed, "moment matrix lost definiteness");
    kappa = (a.array() * llt.solve(a).array()).colwise().sum().transpose();
    Eigen::Index jmax = 0, jmin = -1;
    kappa.maxCoeff(&jmax);
    for (Eigen::Index j = 0; j < m; ++j)
      if (u(j) > 0.0 && (jmin < 0 || kappa(j) < kappa(jmin))) jmin = j;
    gap = kappa(jmax) / n - 1.0;
    if (gap <= gap_tol) break;
    const double up = kappa(jmax) - n;
    const double down = n - kappa(jmin);
    if (up >= down) {
      const double step = (kappa(jmax) / n - 1.0) / (kappa(jmax) - 1.0);
      u *= 1.0 - step;
      u(jmax) += step;
    } else {
      const double step = std::max(-u(jmin) / (1.0 - u(jmin)), (kappa(jmin) / n - 1.0) / (kappa(jmin) - 1.0));
      u *= 1.0 - step;
      u(jmin) += step;
      u(jmin) = std::max(0.0, u(jmin));
    }
  }
  if (!(gap <= gap_tol)) fail(ErrorKind::NormalizationFailed, "no convergence, gap " + std::to_string(gap));
  const Eigen::MatrixXd nm = n * (a * u.asDiagonal() * a.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(nm);
  const Eigen::MatrixXd map = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
  return {transform(k, map), map, gap, iter};
}

double projection_section_gap(const BodyND& k, const Eigen::MatrixXd& frame) {
  require(frame.rows() == k.dim() && frame.cols() == 2, "frame must be n x 2");
  const BodyND p = polar_nd(k);
  constexpr int kDirs = 360;
  std::vector<Vec2> w(kDirs);
  std::vector<double> h_proj(kDirs), rho(kDirs);
  for (int j = 0; j < kDirs; ++j) {
    w[static_cast<std::size_t>(j)] = unit(2.0 * kPi * j / kDirs);
    const Eigen::VectorXd x = frame.col(0) * w[static_cast<std::size_t>(j)].x + frame.col(1) * w[static_cast<std::size_t>(j)].y;
    h_proj[static_cast<std::size_t>(j)] = support_nd(p, x);
    rho[static_cast<std::size_t>(j)] = radial_nd(p, x);
  }
  double gap = 0.0;
  for (int j = 0; j < kDirs; ++j) {
    double h_sec = 0.0;
    for (int i = 0; i < kDirs; ++i)
      h_sec = std::max(h_sec, rho[static_cast<std::size_t>(i)] * dot(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)]));
    gap = std::max(gap, std::abs(h_proj[static_cast<std::size_t>(j)] - h_sec));
  }
  return gap;
}

SymmetricPolygon2 section_polygon(const BodyND& k, const Eigen::MatrixXd& frame) {
  require(frame.rows() == k.dim() && frame.cols() == 2, "frame must be n x 2");
  if (k.has_facets() && !k.is_ellipsoid()) {
    // {w : |a.Fw| <= 1} is the planar polar of the hull of the F^T a.
    std::vector<Vec2> pts;
    for (Eigen::Index i = 0; i < k.facets().rows() / 2; ++i) {
      const Eigen::Vector2d q = frame.transpose() * k.facets().row(i).transpose();
      pts.push_back({q(0), q(1)});
    }
    return polar(make_polygon(pts));
  }
  constexpr int kDirs = 360;
  std::vector<Vec2> pts;
  for (int j = 0; j < kDirs / 2; ++j) {
    const Vec2 w = unit(2.0 * kPi * j / kDirs);
    pts.push_back(w * radial_nd(k, frame.col(0) * w.x + frame.col(1) * w.y));
  }
  return make_polygon(pts);
}

PlaneSection section_plane(const BodyND& k, std::uint64_t seed, double tol, int budget) {
  const int n = k.dim();
  require(n >= 3, "section_plane: n must be >= 3");
  Eigen::MatrixXd best_frame;
  double best = INFINITY;
  int used = 0;
  auto consider = [&](const Eigen::MatrixXd& f) {
    ++used;
    const double g = projection_section_gap(k, f);
    if (g < best) {
      best = g;
      best_frame = f;
    }
    return g;
  };
  for (int i = 0; i < n && best >= tol; ++i) {
    for (int j = i + 1; j < n && best >= tol; ++j) {
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, 2);
      f(i, 0) = 1.0;
      f(j, 1) = 1.0;
      consider(f);
    }
  }
  CounterRng rng(seed, 0x91a5e);
  const int random_starts = std::max(1, budget / 8);
  for (int r = 0; r < random_starts && best >= tol && used < budget; ++r) consider(orthonormalize(gaussian_matrix(n, 2, rng)));
  double sigma = 0.2;
  while (best >= tol && used < budget) {
    const double before = best;
    consider(orthonormalize(best_frame + sigma * gaussian_matrix(n, 2, rng)));
    sigma = best < before ? std::min(0.5, sigma * 1.5) : std::max(1e-4, sigma * 0.85);
  }
  if (best >= tol)
    fail(ErrorKind::PlaneSearchFailed, "best projection/section gap " + std::to_string(best) + " after " + std::to_string(used) + " frames");
  return {best_frame, best, section_polygon(k, best_frame)};
}

}  // namespace mahler
