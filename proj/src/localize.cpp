#include "mahler/localize.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mahler {
namespace {

constexpr double kPi = std::numbers::pi;

Vec3 any_orthogonal(const Vec3& x) {
  const Vec3 e = std::abs(x.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (e - e.dot(x) * x).normalized();
}

// tan(E/2) = |a.(b x c)| / (1 + a.b + b.c + c.a) for the spherical excess E.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

// Canonical sign: the first coordinate that is clearly nonzero is positive.
Vec3 canonical(const Vec3& x) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(x(i)) > 1e-12) return x(i) > 0 ? x : Vec3(-x);
  }
  return x;
}

bool lexicographic_less(const Vec3& a, const Vec3& b) {
  for (int i = 0; i < 3; ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return false;
}

// Region-restricted data for the halving map: node directions with their
// weighted G values; the map is F_i(x) = sum a_i (2 ramp(x.u) - 1).
struct HalvingProblem {
  std::vector<Vec3> u;
  std::vector<double> a1, a2;
  double abs1 = 0.0, abs2 = 0.0;

  Eigen::Vector2d map(const Vec3& x) const {
    CompensatedSum f1, f2;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double s = 2.0 * cut_ramp(x.dot(u[i]), kRampWidth) - 1.0;
      f1.add(a1[i] * s);
      f2.add(a2[i] * s);
    }
    return {f1.value(), f2.value()};
  }

  // Scaled so that the residual is the max norm: |I_i(x) - T_i/2| / A_i.
  Eigen::Vector2d scaled(const Vec3& x) const {
    const Eigen::Vector2d f = map(x);
    return {abs1 > 0 ? 0.5 * f(0) / abs1 : 0.0, abs2 > 0 ? 0.5 * f(1) / abs2 : 0.0};
  }

  double residual(const Vec3& x) const { return scaled(x).cwiseAbs().maxCoeff(); }
};

HalvingProblem make_problem(const GridFunctions& g, const SphericalRegion& region) {
  HalvingProblem p;
  const auto& nodes = g.grid->nodes();
  const auto& w = g.grid->weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double rw = region_weight(region, nodes[i]);
    if (rw <= 0.0) continue;
    p.u.push_back(nodes[i]);
    p.a1.push_back(w[i] * rw * g.g1[i]);
    p.a2.push_back(w[i] * rw * g.g2[i]);
    p.abs1 += std::abs(p.a1.back());
    p.abs2 += std::abs(p.a2.back());
  }
  return p;
}

Halving newton(const HalvingProblem& prob, Vec3 x, double tol) {
  double r = prob.residual(x);
  constexpr double kH = 1e-6;
  for (int iter = 0; iter < 60 && r > 1e-3 * tol; ++iter) {
    const Vec3 e1 = any_orthogonal(x);
    const Vec3 e2 = x.cross(e1);
    Eigen::Matrix2d j;
    j.col(0) = (prob.scaled((x + kH * e1).normalized()) - prob.scaled((x - kH * e1).normalized())) / (2 * kH);
    j.col(1) = (prob.scaled((x + kH * e2).normalized()) - prob.scaled((x - kH * e2).normalized())) / (2 * kH);
    if (std::abs(j.determinant()) < 1e-300) break;
    Eigen::Vector2d step = -j.partialPivLu().solve(prob.scaled(x));
    if (step.norm() > 0.3) step *= 0.3 / step.norm();
    bool moved = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Vec3 cand = (x + step(0) * e1 + step(1) * e2).normalized();
      const double rc = prob.residual(cand);
      if (rc < r) {
        x = cand;
        r = rc;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {x, r};
}

double wrapped_difference(double a, double b) {
  double d = b - a;
  while (d > kPi) d -= 2 * kPi;
  while (d < -kPi) d += 2 * kPi;
  return d;
}

Halving search_free(const HalvingProblem& prob, double tol) {
  const IcosaGrid& mesh = IcosaGrid::shared(3);
  const auto& nodes = mesh.nodes();
  std::vector<Eigen::Vector2d> f(nodes.size());
  std::vector<double> res(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    f[i] = prob.scaled(nodes[i]);
    res[i] = f[i].cwiseAbs().maxCoeff();
  }
  std::vector<Vec3> starts;
  // Cells around which the image winds contain a zero.
  for (const auto& t : mesh.triangles()) {
    double turn = 0.0;
    bool flat = false;
    for (int k = 0; k < 3; ++k) {
      const auto& fa = f[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
      const auto& fb = f[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])];
      if (fa.norm() < 1e-300 || fb.norm() < 1e-300) flat = true;
      turn += wrapped_difference(std::atan2(fa(1), fa(0)), std::atan2(fb(1), fb(0)));
    }
    if (!flat && std::abs(turn) > kPi) {
      starts.push_back((nodes[static_cast<std::size_t>(t[0])] + nodes[static_cast<std::size_t>(t[1])] +
                        nodes[static_cast<std::size_t>(t[2])]).normalized());
    }
  }
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return res[a] < res[b]; });
  for (std::size_t k = 0; k < std::min<std::size_t>(4, order.size()); ++k) starts.push_back(nodes[order[k]]);

  Halving best{nodes[order[0]], res[order[0]]};
  for (const Vec3& s : starts) {
    Halving h = newton(prob, s, tol);
    h.x = canonical(h.x);
    const bool both_ok = h.residual <= tol && best.residual <= tol;
    if (both_ok ? lexicographic_less(h.x, best.x) && h.residual <= best.residual * (1 + 1e-9) + 1e-15
                : h.residual < best.residual)
      best = h;
  }
  best.x = canonical(best.x);
  return best;
}

Halving search_orthogonal(const HalvingProblem& prob, const Vec3& axis) {
  const Vec3 b1 = any_orthogonal(axis);
  const Vec3 b2 = axis.cross(b1);
  auto point = [&](double phi) { return Vec3(std::cos(phi) * b1 + std::sin(phi) * b2); };
  constexpr int kScan = 720;
  double best_phi = 0.0, best_r = INFINITY;
  for (int i = 0; i < kScan; ++i) {
    const double phi = kPi * i / kScan;  // F is odd, half a turn suffices
    const double r = prob.residual(point(phi));
    if (r < best_r) {
      best_r = r;
      best_phi = phi;
    }
  }
  double lo = best_phi - kPi / kScan, hi = best_phi + kPi / kScan;
  for (int iter = 0; iter < 80; ++iter) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (prob.residual(point(m1)) <= prob.residual(point(m2)))
      hi = m2;
    else
      lo = m1;
  }
  const double r = prob.residual(point(0.5 * (lo + hi)));
  if (r < best_r) {
    best_r = r;
    best_phi = 0.5 * (lo + hi);
  }
  return {canonical(point(best_phi)), best_r};
}

// Elevation interval [lo, hi] of the region on the meridian through g, where
// the meridian is cos(e) g + sin(e) p, e in [-pi/2, pi/2].
std::optional<std::pair<double, double>> transverse_interval(const SphericalRegion& region, const Vec3& g, const Vec3& p) {
  double lo = -kPi / 2, hi = kPi / 2;
  for (const Vec3& c : region.cuts) {
    const double a = c.dot(g), b = c.dot(p);
    if (std::hypot(a, b) < 1e-15) continue;
    const double delta = std::atan2(b, a);
    lo = std::max(lo, delta - kPi / 2);
    hi = std::min(hi, delta + kPi / 2);
  }
  if (hi <= lo) return std::nullopt;
  return std::pair{lo, hi};
}

}  // namespace

IcosaGrid::IcosaGrid(int level) : level_(level) {
  require(level >= 0 && level <= 8, "IcosaGrid: level must lie in [0, 8]");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                             {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& v : raw) nodes_.push_back(Vec3(v[0], v[1], v[2]).normalized());
  triangles_ = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      nodes_.push_back((nodes_[static_cast<std::size_t>(a)] + nodes_[static_cast<std::size_t>(b)]).normalized());
      const int idx = static_cast<int>(nodes_.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(triangles_.size() * 4);
    for (const auto& t : triangles_) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    triangles_ = std::move(next);
  }
  weights_.assign(nodes_.size(), 0.0);
  CompensatedSum total;
  for (const auto& t : triangles_) {
    const double area = spherical_triangle_area(nodes_[static_cast<std::size_t>(t[0])], nodes_[static_cast<std::size_t>(t[1])],
                                                nodes_[static_cast<std::size_t>(t[2])]);
    for (const int v : t) weights_[static_cast<std::size_t>(v)] += area / 3.0;
    total.add(area);
  }
  for (auto& w : weights_) w /= total.value();
}

const IcosaGrid& IcosaGrid::shared(int level) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<IcosaGrid>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[level];
  if (!slot) slot = std::make_unique<IcosaGrid>(level);
  return *slot;
}

double hemisphere_integral(const SphereFunction& g, const Vec3& x_in, int resolution) {
  require(resolution >= 4, "hemisphere_integral: resolution must be >= 4");
  const Vec3 x = x_in.normalized();
  const Vec3 e1 = any_orthogonal(x);
  const Vec3 e2 = x.cross(e1);
  int level = 1;
  while ((1 << level) < resolution && level < kGaussMaxLevel) ++level;
  const GaussRule& rule = gauss_legendre(level);
  const int azimuths = 2 * resolution;
  CompensatedSum s;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double z = 0.5 * (rule.nodes[i] + 1.0);  // height in (0, 1)
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    CompensatedSum ring;
    for (int j = 0; j < azimuths; ++j) {
      const double phi = 2.0 * kPi * j / azimuths;
      ring.add(g(z * x + r * (std::cos(phi) * e1 + std::sin(phi) * e2)));
    }
    s.add(0.5 * rule.weights[i] * ring.value() / azimuths);
  }
  // dmu = dz dphi / (4 pi): the azimuthal mean carries 2 pi.
  return 0.5 * s.value();
}

bool SphericalRegion::contains(const Vec3& u, double slack) const {
  return std::all_of(cuts.begin(), cuts.end(), [&](const Vec3& c) { return c.dot(u) > -slack; });
}

SphericalRegion SphericalRegion::with_cut(const Vec3& c) const {
  SphericalRegion r = *this;
  r.cuts.push_back(c.normalized());
  return r;
}

std::optional<Vec3> SphericalRegion::interior_point() const {
  std::vector<Vec3> candidates;
  if (cuts.empty()) return Vec3::UnitZ();
  Vec3 sum = Vec3::Zero();
  for (const auto& c : cuts) sum += c;
  if (sum.norm() > 1e-12) candidates.push_back(sum.normalized());
  Vec3 vsum = Vec3::Zero();
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    for (std::size_t j = i + 1; j < cuts.size(); ++j) {
      const Vec3 w = cuts[i].cross(cuts[j]);
      if (w.norm() < 1e-12) continue;
      for (const Vec3& v : {Vec3(w.normalized()), Vec3(-w.normalized())})
        if (contains(v, 1e-12)) vsum += v;
    }
  }
  if (vsum.norm() > 1e-12) candidates.push_back(vsum.normalized());
  for (const Vec3& c : cuts) candidates.push_back(c);
  for (const Vec3& v : candidates)
    if (contains(v, -1e-14)) return v;
  return std::nullopt;
}

double SphericalRegion::max_linear(const Vec3& p_in) const {
  const Vec3 p = p_in.normalized();
  if (contains(p, 1e-12)) return 1.0;
  double best = -INFINITY;
  for (const Vec3& c : cuts) {
    const Vec3 v = p - p.dot(c) * c;
    if (v.norm() > 1e-14 && contains(v.normalized(), 1e-12)) best = std::max(best, p.dot(v.normalized()));
  }
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    for (std::size_t j = i + 1; j < cuts.size(); ++j) {
      const Vec3 w = cuts[i].cross(cuts[j]);
      if (w.norm() < 1e-14) continue;
      for (const Vec3& v : {Vec3(w.normalized()), Vec3(-w.normalized())})
        if (contains(v, 1e-12)) best = std::max(best, p.dot(v));
    }
  }
  return best;
}

double cut_ramp(double d, double width) {
  if (d >= width) return 1.0;
  if (d <= -width) return 0.0;
  const double t = 0.5 * (d + width) / width;
  return t * t * (3.0 - 2.0 * t);
}

double region_weight(const SphericalRegion& region, const Vec3& u, double width) {
  double w = 1.0;
  for (const Vec3& c : region.cuts) {
    w *= cut_ramp(c.dot(u), width);
    if (w == 0.0) break;
  }
  return w;
}

GridFunctions GridFunctions::sample(const SphereFunction& g1, const SphereFunction& g2, const IcosaGrid& grid, Exec exec) {
  GridFunctions out;
  out.grid = &grid;
  out.g1.resize(grid.size());
  out.g2.resize(grid.size());
  const long count = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long i = 0; i < count; ++i) {
    out.g1[static_cast<std::size_t>(i)] = g1(grid.nodes()[static_cast<std::size_t>(i)]);
    out.g2[static_cast<std::size_t>(i)] = g2(grid.nodes()[static_cast<std::size_t>(i)]);
  }
  return out;
}

RegionMasses region_masses(const GridFunctions& g, const SphericalRegion& region, Exec exec) {
  const auto& nodes = g.grid->nodes();
  const auto& w = g.grid->weights();
  std::vector<double> rw(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) rw[i] = w[i] * region_weight(region, nodes[i]);
  RegionMasses m;
  m.g1 = chunked_sum(nodes.size(), [&](std::size_t i) { return rw[i] * g.g1[i]; }, exec);
  m.g2 = chunked_sum(nodes.size(), [&](std::size_t i) { return rw[i] * g.g2[i]; }, exec);
  m.abs1 = chunked_sum(nodes.size(), [&](std::size_t i) { return rw[i] * std::abs(g.g1[i]); }, exec);
  m.abs2 = chunked_sum(nodes.size(), [&](std::size_t i) { return rw[i] * std::abs(g.g2[i]); }, exec);
  m.measure = chunked_sum(nodes.size(), [&](std::size_t i) { return rw[i]; }, exec);
  return m;
}

Halving find_halving_hemisphere(const GridFunctions& g, const SphericalRegion& region, const CutPolicy& policy, double tol) {
  require(g.grid != nullptr, "find_halving_hemisphere: grid functions not sampled");
  const HalvingProblem prob = make_problem(g, region);
  if (prob.u.empty()) throw HalvingError("region holds no grid mass", INFINITY, {region});
  const Halving h = policy.kind == CutPolicy::Kind::Free ? search_free(prob, tol) : search_orthogonal(prob, policy.axis);
  if (!(h.residual <= tol))
    throw HalvingError("no halving hemisphere within tolerance; best residual " + std::to_string(h.residual), h.residual,
                       {region});
  return h;
}

Halving find_halving_hemisphere(const SphereFunction& g1, const SphereFunction& g2, const SphericalRegion& region,
                                const CutPolicy& policy, double tol) {
  const GridFunctions g = GridFunctions::sample(g1, g2, IcosaGrid::shared());
  return find_halving_hemisphere(g, region, policy, tol);
}

std::vector<Leaf> cut_iterate(const GridFunctions& g, int steps, const CutPolicy& policy, Exec exec) {
  require(steps >= 0 && steps <= 12, "cut_iterate: steps must lie in [0, 12]");
  std::vector<SphericalRegion> level{SphericalRegion{}};
  for (int step = 0; step < steps; ++step) {
    std::vector<SphericalRegion> next(2 * level.size());
    std::vector<std::exception_ptr> errors(level.size());
    const long count = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (long i = 0; i < count; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      try {
        const Halving h = find_halving_hemisphere(g, level[idx], policy);
        next[2 * idx] = level[idx].with_cut(h.x);
        next[2 * idx + 1] = level[idx].with_cut(-h.x);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (!e) continue;
      try {
        std::rethrow_exception(e);
      } catch (const HalvingError& h) {
        const std::string prefix = std::string(to_string(h.kind())) + ": ";
        throw HalvingError(std::string(h.what()).substr(prefix.size()) + " at depth " + std::to_string(step + 1), h.residual(), level);
      }
    }
    level = std::move(next);
  }
  std::vector<Leaf> leaves(level.size());
  const long count = static_cast<long>(level.size());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long i = 0; i < count; ++i)
    leaves[static_cast<std::size_t>(i)] = {level[static_cast<std::size_t>(i)], region_masses(g, level[static_cast<std::size_t>(i)])};
  return leaves;
}

GeodesicArc GeodesicArc::through(const Vec3& a_in, const Vec3& b_in) {
  const Vec3 a = a_in.normalized(), b = b_in.normalized();
  const Vec3 t = b - a.dot(b) * a;
  require(t.norm() > 1e-12, "GeodesicArc: endpoints must be distinct and not antipodal");
  return {a, t.normalized(), std::acos(std::clamp(a.dot(b), -1.0, 1.0))};
}

Pancake fit_pancake(const SphericalRegion& region, const GeodesicArc& target) {
  const Vec3 p = target.pole();
  const GeodesicArc circle{target.start, target.tangent, 2 * kPi};
  // Longitudes measured from the target midpoint.
  const double mid = 0.5 * target.length;
  auto nonempty = [&](double t) { return transverse_interval(region, circle.at(mid + t), p).has_value(); };
  constexpr int kScan = 4096;
  std::vector<char> hit(kScan);
  int hits = 0;
  for (int i = 0; i < kScan; ++i) {
    hit[static_cast<std::size_t>(i)] = nonempty(-kPi + 2 * kPi * (i + 0.5) / kScan);
    hits += hit[static_cast<std::size_t>(i)];
  }
  const double width = std::asin(std::clamp(std::max(region.max_linear(p), region.max_linear(-p)), 0.0, 1.0));
  if (hits == kScan || hits == 0) return {region, circle, width};
  // Longest circular run of hits.
  int best_start = 0, best_len = 0;
  for (int i = 0; i < kScan; ++i) {
    if (!hit[static_cast<std::size_t>(i)] || hit[static_cast<std::size_t>((i + kScan - 1) % kScan)]) continue;
    int len = 0;
    while (len < kScan && hit[static_cast<std::size_t>((i + len) % kScan)]) ++len;
    if (len > best_len) {
      best_len = len;
      best_start = i;
    }
  }
  const double cell = 2 * kPi / kScan;
  auto refine = [&](double inside, double outside) {
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (inside + outside);
      (nonempty(m) ? inside : outside) = m;
    }
    return inside;
  };
  const double t_in0 = -kPi + cell * (best_start + 0.5);
  const double t_in1 = -kPi + cell * (best_start + best_len - 0.5);
  const double t0 = refine(t_in0, t_in0 - cell);
  const double t1 = refine(t_in1, t_in1 + cell);
  const Vec3 start = circle.at(mid + t0);
  const Vec3 tangent = -std::sin(mid + t0) * circle.start + std::cos(mid + t0) * circle.tangent;
  return {region, GeodesicArc{start, tangent, t1 - t0}, width};
}

CutSequence axis_cut_sequence(const SphericalRegion& region, const GeodesicArc& target, int steps) {
  require(steps >= 0, "axis_cut_sequence: steps must be >= 0");
  require(target.length < kPi, "axis_cut_sequence: target must be shorter than a half circle");
  const Vec3 p = target.pole();
  const Vec3 m = target.at(0.5 * target.length);
  CutSequence out;
  SphericalRegion current = region;
  Pancake pk = fit_pancake(current, target);
  out.widths.push_back(pk.width);
  for (int j = 0; j < steps; ++j) {
    const double e_max = std::asin(std::clamp(current.max_linear(p), -1.0, 1.0));
    const double e_min = -std::asin(std::clamp(current.max_linear(-p), -1.0, 1.0));
    if (e_max <= 0.0 && e_min >= 0.0) break;
    const double beta = e_max >= -e_min ? 0.5 * e_max : 0.5 * e_min;
    // Boundary meets the transverse geodesic through m at elevation beta.
    const Vec3 normal = std::sin(std::abs(beta)) * m - (beta >= 0 ? 1.0 : -1.0) * std::cos(beta) * p;
    current = current.with_cut(normal);
    pk = fit_pancake(current, target);
    out.widths.push_back(pk.width);
  }
  out.pancake = pk;
  return out;
}

SphericalNeedle make_spherical_needle(const Eigen::VectorXd& start, const Eigen::VectorXd& tangent, double length, int k,
                                      double t0) {
  require(start.size() == tangent.size() && start.size() >= 2, "needle: start and tangent must share a dimension");
  require(std::abs(start.norm() - 1.0) < 1e-12 && std::abs(tangent.norm() - 1.0) < 1e-12, "needle: frame must be unit");
  require(std::abs(start.dot(tangent)) < 1e-12, "needle: tangent must be orthogonal to start");
  return {start, tangent, make_needle(k, t0, make_interval(0.0, length))};
}

SphericalNeedle extract_needle(const Pancake& p, int k) {
  if (!(p.width < kPancakeMaxWidth))
    fail(ErrorKind::PancakeTooThick, "pancake width " + std::to_string(p.width) + " is not below " + std::to_string(kPancakeMaxWidth));
  const GeodesicArc& axis = p.axis;
  if (!(axis.length > 0.0 && axis.length <= kPi)) fail(ErrorKind::InvalidNeedle, "pancake axis is not a proper arc");
  const Vec3 pole = axis.pole();
  auto mass = [&](double s) {
    const auto iv = transverse_interval(p.region, axis.at(s), pole);
    return iv ? std::sin(iv->second) - std::sin(iv->first) : 0.0;
  };
  using boost::math::quadrature::gauss_kronrod;
  const double total = gauss_kronrod<double, 31>::integrate(mass, 0.0, axis.length, 15, 1e-12);
  const double first = gauss_kronrod<double, 31>::integrate([&](double s) { return s * mass(s); }, 0.0, axis.length, 15, 1e-12);
  double t0 = total > 0 ? first / total : 0.5 * axis.length;
  // cos(s - t0) must stay positive on the open arc.
  const double lo = std::max(0.0, axis.length - kPi / 2), hi = std::min(axis.length, kPi / 2);
  t0 = std::clamp(t0, lo, hi);
  return make_spherical_needle(axis.start, axis.tangent, axis.length, k, t0);
}

NeedleProduct needle_product(const BodyND& k, const SphericalNeedle& needle) {
  require(needle.start.size() == k.dim(), "needle_product: needle and body dimensions differ");
  const BodyND polar = polar_nd(k);
  const int n = k.dim();
  using boost::math::quadrature::gauss_kronrod;
  auto moment = [&](const BodyND& body) {
    auto f = [&](double s) { return std::pow(radial_nd(body, needle.at(s)), n) / n * needle.density(s); };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, needle.length(), 20, 1e-14);
  };
  NeedleProduct out;
  out.left = moment(k);
  out.right = moment(polar);
  out.product = out.left * out.right;
  return out;
}

MahlerG mahler_g(const BodyND& k, double margin) {
  require(k.dim() == 3, "mahler_g: body must be three-dimensional");
  require(margin > 0.0, "mahler_g: margin must be positive");
  const BodyND polar = polar_nd(k);
  const IcosaGrid& grid = IcosaGrid::shared();
  auto f1 = [k](const Vec3& u) { return std::pow(radial_nd(k, u), 3) / 3.0; };
  auto f2 = [polar](const Vec3& u) { return std::pow(radial_nd(polar, u), 3) / 3.0; };
  CompensatedSum m1, m2;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    m1.add(grid.weights()[i] * f1(grid.nodes()[i]));
    m2.add(grid.weights()[i] * f2(grid.nodes()[i]));
  }
  MahlerG g;
  g.c = (1.0 + margin) * m1.value();
  g.a = (1.0 + margin) * g.c * m2.value();
  const double c = g.c, a = g.a;
  g.g1 = [c, f1](const Vec3& u) { return c - f1(u); };
  g.g2 = [a, c, f2](const Vec3& u) { return a - c * f2(u); };
  return g;
}

}  // namespace mahler
