#include "mahler/alpha.hpp"

#include <algorithm>
#include <exception>
#include <numbers>

#include "mahler/errors.hpp"
#include "mahler/rng.hpp"

namespace mahler {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvPhi = 0.6180339887498949;  // 1 / golden ratio

void require_exponent(int n) {
  require(n >= kAlphaMinExponent, "alpha: n must be >= " + std::to_string(kAlphaMinExponent));
}

void check_options(const AlphaOptions& opt) {
  require(opt.ell_min > 0.0 && opt.ell_min < kPi, "alpha: ell_min must lie in (0, pi)");
  require(opt.interval_grid >= 2 && opt.theta_grid >= 2, "alpha: grids need at least 2 points");
  require(opt.refine_starts >= 1 && opt.angle_tol > 0.0, "alpha: invalid refinement settings");
}

// Pattern search over the eight compass moves with shrinking steps on
// (start, length); start is free, length is clamped to [ell_min, pi].
IntervalMin descend(const AlphaSlice& f, double a, double l, double step_a, double step_l, const AlphaOptions& opt) {
  static constexpr int kMoves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  double best = f(a, l);
  while (std::max(step_a, step_l) > opt.angle_tol) {
    bool improved = false;
    for (const auto& mv : kMoves) {
      const double ca = a + mv[0] * step_a;
      const double cl = std::clamp(l + mv[1] * step_l, opt.ell_min, kPi);
      if (ca == a && cl == l) continue;
      const double v = f(ca, cl);
      if (v < best) {
        best = v;
        a = ca;
        l = cl;
        improved = true;
        break;
      }
    }
    if (!improved) {
      step_a *= 0.5;
      step_l *= 0.5;
    }
  }
  return {ConeInterval{wrap_angle(a, kPi), l}, best};
}

IntervalMin descend_anchored(const AlphaSlice& f, double l, double step, const AlphaOptions& opt) {
  double best = f(0.0, l);
  while (step > opt.angle_tol) {
    bool improved = false;
    for (const double dl : {-step, step}) {
      const double cand = std::clamp(l + dl, opt.ell_min, kPi);
      if (cand == l) continue;
      const double v = f(0.0, cand);
      if (v < best) {
        best = v;
        l = cand;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return {ConeInterval{0.0, l}, best};
}

// Grid cells no larger than any neighbour, smallest first, at most `count`.
// The start coordinate wraps when `periodic_rows` is set.
std::vector<std::size_t> local_minima(const std::vector<double>& values, int rows, int cols, bool periodic_rows,
                                      int count) {
  std::vector<std::size_t> idx;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = values[static_cast<std::size_t>(i * cols + j)];
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1 && is_min; ++dj) {
          if (di == 0 && dj == 0) continue;
          int ii = i + di;
          const int jj = j + dj;
          if (periodic_rows) ii = (ii + rows) % rows;
          if (ii < 0 || ii >= rows || jj < 0 || jj >= cols) continue;
          if (values[static_cast<std::size_t>(ii * cols + jj)] < v) is_min = false;
        }
      }
      if (is_min) idx.push_back(static_cast<std::size_t>(i * cols + j));
    }
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  if (idx.size() > static_cast<std::size_t>(count)) idx.resize(static_cast<std::size_t>(count));
  return idx;
}

IntervalMin inner_min(const AlphaSlice& f, const AlphaOptions& opt, Exec exec) {
  const int g = opt.interval_grid;
  const double da = kPi / g;
  const double dl = (kPi - opt.ell_min) / (g - 1);
  std::vector<double> grid(static_cast<std::size_t>(g) * static_cast<std::size_t>(g));
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      grid[static_cast<std::size_t>(i * g + j)] = f(i * da, opt.ell_min + j * dl);
  IntervalMin best{{0.0, kPi}, INFINITY};
  for (const std::size_t k : local_minima(grid, g, g, true, opt.refine_starts)) {
    const int i = static_cast<int>(k) / g, j = static_cast<int>(k) % g;
    const IntervalMin r = descend(f, i * da, opt.ell_min + j * dl, da, dl, opt);
    if (r.value < best.value) best = r;
  }
  // Minima usually sit on the shortest admissible length; scan that edge finely.
  const int fine = 16 * g;
  const double dfa = kPi / fine;
  std::vector<double> edge(static_cast<std::size_t>(fine));
  for (int i = 0; i < fine; ++i) edge[static_cast<std::size_t>(i)] = f(i * dfa, opt.ell_min);
  for (const std::size_t k : local_minima(edge, fine, 1, true, opt.refine_starts)) {
    const IntervalMin r = descend(f, static_cast<double>(k) * dfa, opt.ell_min, dfa, dl / 16, opt);
    if (r.value < best.value) best = r;
  }
  return best;
}

IntervalMin inner_min_anchored(const AlphaSlice& f, const AlphaOptions& opt) {
  const int g = 4 * opt.interval_grid;
  const double dl = (kPi - opt.ell_min) / (g - 1);
  std::vector<double> grid(static_cast<std::size_t>(g));
  for (int j = 0; j < g; ++j) grid[static_cast<std::size_t>(j)] = f(0.0, opt.ell_min + j * dl);
  IntervalMin best{{0.0, kPi}, INFINITY};
  for (const std::size_t k : local_minima(grid, 1, g, false, opt.refine_starts)) {
    const IntervalMin r = descend_anchored(f, opt.ell_min + static_cast<double>(k) * dl, dl, opt);
    if (r.value < best.value) best = r;
  }
  return best;
}

using InnerFn = IntervalMin (*)(const AlphaSlice&, const AlphaOptions&);

IntervalMin inner_serial(const AlphaSlice& f, const AlphaOptions& opt) { return inner_min(f, opt, Exec::Serial); }

// Grid over theta in [0, pi), then golden-section refinement around the best
// cell. The objective is pi-periodic in theta.
AlphaWitness outer_max(int n, const SymmetricPolygon2& s, const AlphaOptions& opt, InnerFn inner) {
  require_exponent(n);
  check_options(opt);
  require_shell_body(n, s);
  const SymmetricPolygon2 sp = polar(s);
  const int count = opt.theta_grid;
  const double dt = kPi / count;
  std::vector<IntervalMin> sweep(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
  for (int i = 0; i < count; ++i) sweep[static_cast<std::size_t>(i)] = inner(AlphaSlice(n, i * dt, s, sp), opt);

  std::size_t best_i = 0;
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i].value > sweep[best_i].value) best_i = i;
  AlphaWitness best{static_cast<double>(best_i) * dt, sweep[best_i].interval, sweep[best_i].value};

  auto eval = [&](double theta) { return inner(AlphaSlice(n, theta, s, sp), opt); };
  double lo = best.theta - dt, hi = best.theta + dt;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  IntervalMin f1 = eval(x1), f2 = eval(x2);
  while (hi - lo > opt.angle_tol) {
    if (f1.value >= f2.value) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = eval(x2);
    }
  }
  for (const auto& [x, fx] : {std::pair{x1, f1}, std::pair{x2, f2}})
    if (fx.value > best.value) best = {wrap_angle(x, kPi), fx.interval, fx.value};
  return best;
}

}  // namespace

void require_shell_body(int n, const SymmetricPolygon2& s) {
  const auto shell = ShellConstraint::for_exponent(n);
  if (!contains_shell(s, shell))
    fail(ErrorKind::OutOfClass, "body is outside the shell [1, sqrt(n+1)]: inradius " + std::to_string(inradius(s)) +
                                    ", circumradius " + std::to_string(circumradius(s)));
}

AlphaEvaluation alpha_term(int n, double theta, const ConeInterval& interval, const SymmetricPolygon2& s) {
  require_exponent(n);
  require_shell_body(n, s);
  if (!(interval.length > 0.0)) fail(ErrorKind::DegenerateInterval, "alpha_term: interval has zero length");
  const auto m = make_measure(n, theta);
  AlphaEvaluation e;
  e.n = n;
  e.theta = theta;
  e.interval = interval;
  e.numerator_left = sector_measure_range(s, m, interval.start, interval.end());
  e.numerator_right = sector_measure_range(polar(s), m, interval.start, interval.end());
  e.denominator = g_integral_range(m, interval.start, interval.end());
  e.value = e.numerator_left * e.numerator_right / (e.denominator * e.denominator);
  return e;
}

double limit_point_value(int n, double /*theta*/, double t, const SymmetricPolygon2& s) {
  const double r = radial(s, t) * radial(polar(s), t);
  return std::pow(r, n + 1) / ((n + 1.0) * (n + 1.0));
}

double lemma_floor(int n) {
  require(n >= 2, "lemma_floor: n must be >= 2");
  const double k = n + 1.0;
  return 1.0 / (k * k * std::pow(k, 0.5 * k));
}

AlphaSlice::AlphaSlice(int n, double theta, const SymmetricPolygon2& s, const SymmetricPolygon2& s_polar)
    : n_(n), theta_(theta), body_(s, make_measure(n, theta)), polar_(s_polar, make_measure(n, theta)) {}

double AlphaSlice::operator()(double start, double length) const {
  const double a = body_.measure(start, start + length);
  const double b = polar_.measure(start, start + length);
  const double g = cos_power_integral(n_ - 1, start + theta_, start + length + theta_);
  return a * b / (g * g);
}

AlphaEvaluation AlphaSlice::evaluate(double start, double length) const {
  AlphaEvaluation e;
  e.n = n_;
  e.theta = theta_;
  e.interval = {start, length};
  e.numerator_left = body_.measure(start, start + length);
  e.numerator_right = polar_.measure(start, start + length);
  e.denominator = cos_power_integral(n_ - 1, start + theta_, start + length + theta_);
  e.value = e.numerator_left * e.numerator_right / (e.denominator * e.denominator);
  return e;
}

IntervalMin min_over_intervals(int n, double theta, const SymmetricPolygon2& s, const AlphaOptions& opt) {
  require_exponent(n);
  check_options(opt);
  require_shell_body(n, s);
  return inner_min(AlphaSlice(n, theta, s, polar(s)), opt, opt.exec);
}

IntervalMin min_over_anchored(int n, double theta, const SymmetricPolygon2& s, const AlphaOptions& opt) {
  require_exponent(n);
  check_options(opt);
  require_shell_body(n, s);
  return inner_min_anchored(AlphaSlice(n, theta, s, polar(s)), opt);
}

std::vector<IntervalMin> theta_sweep(int n, const SymmetricPolygon2& s, int count, const AlphaOptions& opt) {
  require_exponent(n);
  check_options(opt);
  require(count >= 1, "theta_sweep: count must be >= 1");
  require_shell_body(n, s);
  const SymmetricPolygon2 sp = polar(s);
  std::vector<IntervalMin> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = inner_min(AlphaSlice(n, i * kPi / count, s, sp), opt, Exec::Serial);
  return out;
}

AlphaWitness alpha_n_S(int n, const SymmetricPolygon2& s, const AlphaOptions& opt) {
  return outer_max(n, s, opt, inner_serial);
}

AlphaWitness alpha1_n_S(int n, const SymmetricPolygon2& s, const AlphaOptions& opt) {
  return outer_max(n, s, opt, inner_min_anchored);
}

bool project_to_shell(std::vector<Vec2> half, const ShellConstraint& shell, SymmetricPolygon2& out) {
  constexpr int kRounds = 10;
  const double clip = shell.r_outer * (1.0 - 1e-9);
  auto clip_all = [&](std::vector<Vec2>& pts) {
    for (auto& v : pts) {
      const double r = norm(v);
      if (r > clip) v = v * (clip / r);
    }
  };
  try {
    for (int round = 0; round < kRounds; ++round) {
      SymmetricPolygon2 p = make_polygon(half);
      p = scale(p, shell.r_inner / inradius(p));
      if (contains_shell(p, shell)) {
        out = p;
        return true;
      }
      half.assign(p.half().begin(), p.half().end());
      clip_all(half);
    }
    // Rescaling and clipping can stall with the inradius below r_inner. Adding
    // a polygon circumscribed about the inner disk restores B(0, r_inner)
    // while every point stays inside the outer radius.
    const SymmetricPolygon2 inner = scale(circle_polygon(64), shell.r_inner);
    if (norm(inner.vertices()[0]) > clip)
      return false;
    half.insert(half.end(), inner.half().begin(), inner.half().end());
    const SymmetricPolygon2 p = make_polygon(half);
    if (!contains_shell(p, shell)) return false;
    out = p;
    return true;
  } catch (const Error&) {
    return false;
  }
}

AlphaSearchResult alpha_search(const AlphaSearchConfig& config, const AlphaOptions& final_opt) {
  const int n = config.n;
  require_exponent(n);
  require(!config.vertex_pairs.empty(), "alpha_search: vertex_pairs is empty");
  require(config.restarts >= 0 && config.budget >= 0, "alpha_search: negative restarts or budget");
  const auto shell = ShellConstraint::for_exponent(n);

  AlphaOptions coarse;
  coarse.ell_min = config.ell_min;
  coarse.interval_grid = 16;
  coarse.theta_grid = 16;
  coarse.refine_starts = 2;
  coarse.angle_tol = 1e-4;
  coarse.exec = Exec::Serial;

  struct Run {
    bool feasible = false;
    std::vector<Vec2> half;
    std::vector<double> trace;  // best value after each step, index 0 = start
    std::exception_ptr error;
  };
  std::vector<Run> runs(static_cast<std::size_t>(config.restarts));

#pragma omp parallel for schedule(dynamic) if (final_opt.exec == Exec::Parallel)
  for (int r = 0; r < config.restarts; ++r) {
    Run& run = runs[static_cast<std::size_t>(r)];
    const int m = config.vertex_pairs[static_cast<std::size_t>(r) % config.vertex_pairs.size()];
    try {
      SymmetricPolygon2 body = random_shell_body(m, shell, splitmix64(config.seed) + static_cast<std::uint64_t>(r));
      double value = alpha_n_S(n, body, coarse).value;
      run.feasible = true;
      run.trace.push_back(value);
      CounterRng rng(config.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(r));
      double sigma = 0.1;
      for (int it = 0; it < config.budget; ++it) {
        std::vector<Vec2> half(body.half().begin(), body.half().end());
        const auto k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(half.size()) - 1));
        const double dx = rng.normal(), dy = rng.normal();
        half[k] = half[k] + Vec2{dx, dy} * sigma;
        SymmetricPolygon2 cand = body;
        bool accepted = false;
        if (project_to_shell(half, shell, cand)) {
          const double v = alpha_n_S(n, cand, coarse).value;
          if (v < value) {
            value = v;
            body = cand;
            accepted = true;
          }
        }
        sigma = accepted ? std::min(0.5, sigma * 1.5) : std::max(1e-3, sigma * 0.8);
        run.trace.push_back(value);
      }
      run.half.assign(body.half().begin(), body.half().end());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GenerationFailed) run.error = std::current_exception();
    } catch (...) {
      run.error = std::current_exception();
    }
  }
  for (const Run& run : runs)
    if (run.error) std::rethrow_exception(run.error);

  AlphaSearchResult result;
  result.n = n;
  double best_coarse = INFINITY;
  const Run* best_run = nullptr;
  int iteration = 0;
  for (const Run& run : runs) {
    if (!run.feasible) continue;
    for (double v : run.trace) {
      best_coarse = std::min(best_coarse, v);
      result.search_trace.emplace_back(iteration++, best_coarse);
    }
    if (run.trace.back() <= best_coarse && (best_run == nullptr || run.trace.back() < best_run->trace.back()))
      best_run = &run;
  }

  std::vector<SymmetricPolygon2> finalists;
  if (best_run != nullptr) finalists.push_back(make_polygon(best_run->half));
  if (config.include_circle) finalists.push_back(circle_polygon(256));
  if (finalists.empty()) fail(ErrorKind::SearchFailed, "alpha_search: no feasible body within the budget");

  result.alpha_hat = INFINITY;
  for (const auto& body : finalists) {
    const AlphaWitness w = alpha_n_S(n, body, final_opt);
    if (w.value < result.alpha_hat) {
      result.alpha_hat = w.value;
      result.argmin_body = body;
      result.argmax_theta = w.theta;
      result.argmin_interval = w.interval;
    }
  }
  result.search_trace.emplace_back(iteration, result.alpha_hat);
  return result;
}

}  // namespace mahler
