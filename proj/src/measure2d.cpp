#include "mahler/measure2d.hpp"

#include <algorithm>
#include <numbers>

#include "mahler/errors.hpp"
#include "mahler/numeric.hpp"

namespace mahler {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void check_exponent(int n) { require(n >= 1, "measure exponent n must be >= 1"); }

// Zeros of cos(t + theta) strictly inside (a, b).
void append_cos_zeros(double theta, double a, double b, std::vector<double>& out) {
  const double first = kPi / 2 - theta;
  for (double k = std::ceil((a - first) / kPi); first + k * kPi < b; k += 1.0) {
    const double z = first + k * kPi;
    if (z > a) out.push_back(z);
  }
}

std::vector<double> breakpoints(const SymmetricPolygon2* p, double theta, double a, double b) {
  std::vector<double> cuts{a, b};
  append_cos_zeros(theta, a, b, cuts);
  if (p != nullptr) {
    for (const auto& v : p->vertices()) {
      const double base = angle_of(v);
      for (double k = std::ceil((a - base) / kTwoPi); base + k * kTwoPi < b; k += 1.0) {
        const double t = base + k * kTwoPi;
        if (t > a) cuts.push_back(t);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

Vec2 active_facet(const SymmetricPolygon2& p, double t) {
  const Vec2 u = unit(t);
  Vec2 best = p.facets().front();
  double h = -INFINITY;
  for (const auto& a : p.facets()) {
    const double d = dot(a, u);
    if (d > h) {
      h = d;
      best = a;
    }
  }
  return best;
}

// Antiderivative of cos^m on [-pi/2, pi/2] with value 0 at 0.
double cos_power_primitive(int m, double r) {
  const double s = std::sin(r), c = std::cos(r);
  double h_prev = r;  // H_0
  double h = s;       // H_1
  if (m == 0) return h_prev;
  for (int k = 2; k <= m; ++k) {
    const double next = ipow(c, k - 1) * s / k + (k - 1.0) / k * h_prev;
    h_prev = h;
    h = next;
  }
  return h;
}

}  // namespace

AnisotropicMeasure2 make_measure(int n, double theta) {
  check_exponent(n);
  require(std::isfinite(theta), "theta must be finite");
  return {n, wrap_angle(theta, kPi)};
}

ConeInterval make_interval(double start, double length) {
  require(std::isfinite(start) && std::isfinite(length), "interval must be finite");
  if (!(length > 0.0)) fail(ErrorKind::DegenerateInterval, "interval length must be positive");
  require(length <= kPi + 1e-15, "interval length must not exceed pi");
  return {start, std::min(length, kPi)};
}

double g_density(const AnisotropicMeasure2& m, double t) {
  return ipow(std::abs(std::cos(t + m.theta)), m.exponent_n - 1);
}

double g_integral_range(const AnisotropicMeasure2& m, double a, double b) {
  require(b >= a, "g_integral_range: b < a");
  const auto cuts = breakpoints(nullptr, m.theta, a, b);
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    s.add(integrate_adaptive([&](double t) { return g_density(m, t); }, cuts[i], cuts[i + 1]));
  return s.value();
}

double g_integral(const AnisotropicMeasure2& m, const ConeInterval& interval) {
  return g_integral_range(m, interval.start, interval.end());
}

double sector_measure_range(const SymmetricPolygon2& p, const AnisotropicMeasure2& m, double a, double b) {
  require(b >= a, "sector_measure_range: b < a");
  const int n = m.exponent_n;
  const auto cuts = breakpoints(&p, m.theta, a, b);
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double t0 = cuts[i], t1 = cuts[i + 1];
    const Vec2 facet = active_facet(p, 0.5 * (t0 + t1));
    auto integrand = [&](double t) {
      const double rho = 1.0 / dot(facet, unit(t));
      return g_density(m, t) * ipow(rho, n + 1) / (n + 1);
    };
    s.add(integrate_adaptive(integrand, t0, t1));
  }
  return s.value();
}

double sector_measure(const SymmetricPolygon2& p, const AnisotropicMeasure2& m, const ConeInterval& interval) {
  return sector_measure_range(p, m, interval.start, interval.end());
}

double full_measure(const SymmetricPolygon2& p, const AnisotropicMeasure2& m) {
  return 2.0 * sector_measure(p, m, make_interval(0.0, kPi));
}

double cos_power_integral(int m, double s0, double s1) {
  require(s1 >= s0, "cos_power_integral: s1 < s0");
  const double w = cos_power_half_period(m);
  auto phi = [&](double s) {
    const double k = std::floor((s + kPi / 2) / kPi);
    const double r = std::clamp(s - k * kPi, -kPi / 2, kPi / 2);
    return k * w + 0.5 * w + cos_power_primitive(m, r);
  };
  const double diff = phi(s1) - phi(s0);
  if (diff >= 1e-3 * w) return diff;
  // Small result: integrate directly on each single-signed piece.
  std::vector<double> cuts{s0, s1};
  append_cos_zeros(0.0, s0, s1, cuts);
  std::sort(cuts.begin(), cuts.end());
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    s.add(integrate_adaptive([m](double t) { return ipow(std::abs(std::cos(t)), m); }, cuts[i], cuts[i + 1]));
  return s.value();
}

SectorTable::SectorTable(const SymmetricPolygon2& p, const AnisotropicMeasure2& m) : measure_(m) {
  const int n = m.exponent_n;
  check_exponent(n);
  const auto cuts = breakpoints(&p, m.theta, 0.0, kTwoPi);
  CompensatedSum running;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Piece piece;
    piece.t0 = cuts[i];
    piece.t1 = cuts[i + 1];
    const double mid = 0.5 * (piece.t0 + piece.t1);
    const Vec2 facet = active_facet(p, mid);
    piece.psi = angle_of(facet);
    piece.coef = 1.0 / ((n + 1) * ipow(norm(facet), n + 1));
    const double beta = piece.psi + m.theta;
    piece.cos_beta = std::cos(beta);
    piece.sin_beta = std::sin(beta);
    piece.sign = std::cos(mid + m.theta) >= 0.0 ? 1.0 : -1.0;
    piece.cumulative = running.value();
    running.add(piece_integral(piece, piece.t0, piece.t1));
    pieces_.push_back(piece);
  }
  period_total_ = running.value();
}

double SectorTable::piece_integral(const Piece& piece, double a, double b) const {
  if (b <= a) return 0.0;
  const int n = measure_.exponent_n;
  const double u0 = std::tan(a - piece.psi);
  const double u1 = std::tan(b - piece.psi);
  const double q0 = std::max(0.0, piece.sign * (piece.cos_beta - u0 * piece.sin_beta));
  const double q1 = std::max(0.0, piece.sign * (piece.cos_beta - u1 * piece.sin_beta));
  // int_{u0}^{u1} q^{n-1} du for linear q = (u1 - u0)/n * sum_k q1^k q0^{n-1-k}.
  double sum = 0.0;
  double p1 = 1.0;
  for (int k = 0; k < n; ++k) {
    sum += p1 * ipow(q0, n - 1 - k);
    p1 *= q1;
  }
  return piece.coef * (u1 - u0) * sum / n;
}

double SectorTable::cumulative_at(double t) const {
  const double turns = std::floor(t / kTwoPi);
  const double local = t - turns * kTwoPi;
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), local,
                             [](double x, const Piece& pc) { return x < pc.t0; });
  const Piece& piece = *(it == pieces_.begin() ? it : std::prev(it));
  return turns * period_total_ + piece.cumulative + piece_integral(piece, piece.t0, std::min(local, piece.t1));
}

double SectorTable::direct(double a, double b) const {
  double shift = kTwoPi * std::floor(a / kTwoPi);
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), a - shift,
                             [](double x, const Piece& pc) { return x < pc.t0; });
  std::size_t idx = it == pieces_.begin() ? 0 : static_cast<std::size_t>(std::prev(it) - pieces_.begin());
  CompensatedSum s;
  double t = a;
  while (t < b) {
    const Piece& piece = pieces_[idx];
    const double seg_end = std::min(b, shift + piece.t1);
    s.add(piece_integral(piece, std::max(t - shift, piece.t0), seg_end - shift));
    t = seg_end;
    if (++idx == pieces_.size()) {
      idx = 0;
      shift += kTwoPi;
    }
  }
  return s.value();
}

double SectorTable::measure(double a, double b) const {
  require(b >= a, "SectorTable::measure: b < a");
  const double diff = cumulative_at(b) - cumulative_at(a);
  if (diff >= 1e-3 * period_total_) return diff;
  return direct(a, b);
}

double NeedleDensity::operator()(double t) const {
  if (t < interval.start || t > interval.end()) return 0.0;
  return norm_constant * ipow(std::cos(t - t0), k);
}

NeedleDensity make_needle(int k, double t0, const ConeInterval& interval) {
  require(k >= 0, "make_needle: k must be >= 0");
  if (k > 0) {
    const double lo = interval.start - t0, hi = interval.end() - t0;
    if (lo < -kPi / 2 - 1e-12 || hi > kPi / 2 + 1e-12)
      fail(ErrorKind::InvalidNeedle, "interval leaves the positivity window of cos(t - t0)");
  }
  NeedleDensity needle{k, t0, interval, 1.0};
  const double mass = cos_power_integral(k, interval.start - t0, interval.end() - t0);
  needle.norm_constant = 1.0 / mass;
  return needle;
}

double needle_integral(const std::function<double(double)>& f, const NeedleDensity& needle) {
  std::vector<double> cuts{needle.interval.start, needle.interval.end()};
  if (needle.t0 > cuts[0] && needle.t0 < cuts[1]) cuts.insert(cuts.begin() + 1, needle.t0);
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    s.add(integrate_adaptive([&](double t) { return f(t) * needle(t); }, cuts[i], cuts[i + 1]));
  return s.value();
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& f, double a, double b, std::size_t count) {
  require(count >= 2 && b > a, "SampledFunction::sample: need count >= 2 and b > a");
  SampledFunction s{a, b, {}};
  s.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) s.values[i] = f(s.x(i));
  return s;
}

ConcavityReport sin_k_concave_check(const SampledFunction& f, int k, double slack) {
  require(k >= 1, "sin_k_concave_check: k must be >= 1");
  require(f.values.size() >= 64, "sin_k_concave_check: need at least 64 samples");
  require(f.b - f.a < kPi, "sin_k_concave_check: interval must be shorter than pi");
  std::vector<double> root(f.values.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < root.size(); ++i) {
    require(f.values[i] >= 0.0, "sin_k_concave_check: f must be nonnegative");
    root[i] = std::pow(f.values[i], 1.0 / k);
    scale = std::max(scale, root[i]);
  }
  ConcavityReport report;
  report.worst_violation = -INFINITY;
  const long count = static_cast<long>(root.size());
  struct Weight { double alpha; long modulus; };
  for (const Weight w : {Weight{0.25, 4}, Weight{0.5, 2}, Weight{0.75, 4}}) {
    for (long i = 0; i < count; ++i) {
      for (long j = i % w.modulus; j < count; j += w.modulus) {
        if (j == i) continue;
        const double zi = w.alpha * static_cast<double>(i) + (1.0 - w.alpha) * static_cast<double>(j);
        const auto z = static_cast<std::size_t>(std::llround(zi));
        const double d = std::abs(f.x(static_cast<std::size_t>(j)) - f.x(static_cast<std::size_t>(i)));
        const double sd = std::sin(d);
        const double rhs = std::sin(w.alpha * d) / sd * root[static_cast<std::size_t>(i)] +
                           std::sin((1.0 - w.alpha) * d) / sd * root[static_cast<std::size_t>(j)];
        const double violation = rhs - root[z];
        if (violation > report.worst_violation) {
          report.worst_violation = violation;
          report.x1 = f.x(static_cast<std::size_t>(i));
          report.x2 = f.x(static_cast<std::size_t>(j));
          report.alpha = w.alpha;
        }
      }
    }
  }
  report.pass = report.worst_violation <= slack * scale;
  return report;
}

}  // namespace mahler
