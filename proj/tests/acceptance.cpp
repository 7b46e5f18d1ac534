// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "mahler/alpha.hpp"
#include "mahler/bodynd.hpp"
#include "mahler/inequalities.hpp"
#include "mahler/localize.hpp"
#include "mahler/measure2d.hpp"
#include "mahler/rng.hpp"

using namespace mahler;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome circle_calibration() {
  const auto c = circle_polygon(256);
  double worst = 0.0, slowest = 0.0;
  CounterRng rng(101, 0);
  for (int n = 4; n <= 6; ++n) {
    for (int k = 0; k < 5; ++k) {
      const double theta = rng.uniform(0.0, kPi), start = rng.uniform(0.0, 2 * kPi), len = rng.uniform(0.01, kPi);
      const auto t0 = Clock::now();
      const double v = alpha_term(n, theta, make_interval(start, len), c).value;
      slowest = std::max(slowest, seconds_since(t0));
      worst = std::max(worst, std::abs(v - 1.0 / ((n + 1.0) * (n + 1.0))));
    }
  }
  return {worst < 1e-5 && slowest < 1.0,
          "max |alpha - 1/(n+1)^2| = " + fmt("%.3e", worst) + ", slowest evaluation " + fmt("%.3f", slowest) + " s"};
}

Outcome floor_respected() {
  int below = 0, evaluations = 0;
  double worst_ratio = INFINITY;
  for (int n : {4, 5}) {
    const double floor = lemma_floor(n);
    CounterRng rng(200 + static_cast<std::uint64_t>(n), 0);
    for (int i = 0; i < 10000; ++i) {
      const auto s = random_shell_body(rng.uniform_int(2, 10), ShellConstraint::for_exponent(n),
                                       splitmix64(static_cast<std::uint64_t>(i) * 7 + static_cast<std::uint64_t>(n)));
      const double theta = rng.uniform(0.0, kPi);
      const double start = rng.uniform(0.0, 2 * kPi), len = rng.uniform(1e-4, kPi);
      const double v = alpha_term(n, theta, make_interval(start, len), s).value;
      ++evaluations;
      below += v < floor - 1e-12;
      worst_ratio = std::min(worst_ratio, v / floor);
    }
  }
  return {below == 0, std::to_string(evaluations) + " evaluations, " + std::to_string(below) +
                          " below the floor, smallest value/floor = " + fmt("%.3f", worst_ratio)};
}

Outcome mahler_references() {
  bool ok = true;
  std::string detail;
  for (int n = 4; n <= 6; ++n) {
    const auto t0 = Clock::now();
    const auto e = mahler_product(cube(n), SphereSample::halton(n, 1000000, static_cast<std::uint64_t>(n)));
    const double secs = seconds_since(t0);
    const double exact = exact_reference("cube", n);
    const double z = (e.value - exact) / e.se;
    ok = ok && std::abs(z) <= 3.0 && secs < 30.0;
    detail += "cube" + std::to_string(n) + " " + fmt("%.4f", e.value) + " vs " + fmt("%.4f", exact) + " (z " + fmt("%.2f", z) +
              ", " + fmt("%.1f", secs) + " s); ";
  }
  for (int n = 4; n <= 6; ++n) {
    const BodyND ellipsoid = BodyND::from_ellipsoid(random_linear_map(n, 5.0, static_cast<std::uint64_t>(n)));
    const auto e = mahler_product(ellipsoid, SphereSample::halton(n, 1000000, 1));
    const double exact = exact_reference("ball", n);
    ok = ok && std::abs(e.value - exact) <= 3.0 * e.se + 1e-12 * exact;
    detail += "ellipsoid" + std::to_string(n) + " rel err " + fmt("%.1e", std::abs(e.value - exact) / exact) + "; ";
  }
  return {ok, detail};
}

struct PolytopeBatch {
  std::vector<MahlerEstimate> estimates;
};

PolytopeBatch random_polytopes() {
  PolytopeBatch b;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const BodyND k = random_symmetric_polytope(4, 12, splitmix64(0xacce + i));
    b.estimates.push_back(mahler_product(k, SphereSample::halton(4, 20000, i + 1)));
  }
  return b;
}

Outcome bound_chain(const PolytopeBatch& batch) {
  const double via_beta = beta_bound(4, lemma_floor(3));
  const double via_remark = remark_bound(4);
  const double target = std::pow(kPi, 4) / 64.0;
  bool ok = std::abs(via_beta - target) <= 1e-10 && std::abs(via_remark - target) <= 1e-10;
  const auto sample = SphereSample::halton(4, 200000, 9);
  int failures = 0;
  double min_margin = INFINITY;
  for (const BodyND& k : {cube(4), ball(4), cross_polytope(4)}) {
    const auto r = verify_main(k, lemma_floor(3), sample);
    failures += !r.pass;
    min_margin = std::min(min_margin, r.margin);
  }
  for (const auto& e : batch.estimates) {
    const auto r = verify_main(e, 4, lemma_floor(3));
    failures += !r.pass;
    min_margin = std::min(min_margin, r.margin);
  }
  ok = ok && failures == 0;
  return {ok, "beta_bound " + fmt("%.12f", via_beta) + ", remark_bound " + fmt("%.12f", via_remark) + ", " +
                  std::to_string(103 - failures) + "/103 bodies above, smallest margin " + fmt("%.3f", min_margin)};
}

Outcome santalo_ceiling(const PolytopeBatch& batch) {
  int failures = 0;
  double largest = 0.0;
  for (const auto& e : batch.estimates) {
    const auto r = santalo_check(e, 4);
    failures += !r.pass;
    largest = std::max(largest, e.value);
  }
  if (batch.estimates.size() != 100) return {false, "random polytope batch unavailable"};
  return {failures == 0, std::to_string(100 - failures) + "/100 below pi^4/4 = " + fmt("%.4f", std::pow(kPi, 4) / 4) +
                             ", largest product " + fmt("%.4f", largest)};
}

Outcome alpha_equals_alpha1() {
  int violations = 0;
  double worst = 0.0;
  std::string log;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto s = random_shell_body(4 + static_cast<int>(i % 3) * 2, ShellConstraint::for_exponent(4), splitmix64(0xa1 + i));
    const double a = alpha_n_S(4, s).value;
    const double a1 = alpha1_n_S(4, s).value;
    const double gap = std::abs(a - a1);
    worst = std::max(worst, gap);
    if (gap >= 1e-4) {
      ++violations;
      if (violations <= 3) log += " [body " + std::to_string(i) + ": " + fmt("%.6f", a) + " vs " + fmt("%.6f", a1) + "]";
    }
  }
  return {violations == 0, std::to_string(violations) + "/20 bodies with |alpha - alpha1| >= 1e-4, largest gap " +
                               fmt("%.3e", worst) + (log.empty() ? "" : "; evidence against the identity:" + log)};
}

Outcome localization() {
  const MahlerG g = mahler_g(cube(3));
  const auto gf = GridFunctions::sample(g.g1, g.g2, IcosaGrid::shared());
  const auto leaves = cut_iterate(gf, 5);
  int positive = 0;
  double smallest = INFINITY;
  for (const auto& leaf : leaves) {
    positive += leaf.masses.g1 > 0 && leaf.masses.g2 > 0;
    smallest = std::min({smallest, leaf.masses.g1, leaf.masses.g2});
  }
  const auto seq = axis_cut_sequence(SphericalRegion{}, GeodesicArc::through(Vec3::UnitX(), Vec3::UnitY()), 30);
  bool monotone = true;
  int cuts_needed = -1;
  for (std::size_t i = 0; i < seq.widths.size(); ++i) {
    if (i > 0 && seq.widths[i] > seq.widths[i - 1]) monotone = false;
    if (cuts_needed < 0 && seq.widths[i] < kPancakeMaxWidth) cuts_needed = static_cast<int>(i);
  }
  const bool ok = leaves.size() == 32 && positive == 32 && monotone && cuts_needed >= 0 && cuts_needed <= 30;
  return {ok, std::to_string(positive) + "/" + std::to_string(leaves.size()) + " leaves positive (smallest mass " +
                  fmt("%.3e", smallest) + "), width < 0.05 after " + std::to_string(cuts_needed) + " cuts, monotone " +
                  (monotone ? "yes" : "no")};
}

Outcome needle_calibration() {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(4), t = Eigen::VectorXd::Zero(4);
  s(0) = 1;
  t(1) = 1;
  double worst = 0.0;
  for (double t0 : {0.0, 0.4, 0.9}) {
    const auto np = needle_product(ball(4), make_spherical_needle(s, t, 1.2, 2, t0));
    worst = std::max(worst, std::abs(np.product - 1.0 / 16.0));
  }
  return {worst <= 1e-10, "max |product - 1/16| = " + fmt("%.3e", worst)};
}

Outcome saint_raymond() {
  const std::vector<Vec2> pts{{1, 1}, {-1, 1}};
  const auto r = saint_raymond_check(make_polygon(pts), {1, 1});
  bool ok = std::abs(r.lhs - 0.5) <= 1e-10 && std::abs(r.rhs - 0.5) <= 1e-10;
  int passed = 0;
  for (MomentVector m : {MomentVector{1, 1}, MomentVector{1, 3}})
    for (const auto& row : saint_raymond_batch(50, 2, m)) passed += row.pass;
  ok = ok && passed == 100;
  return {ok, "calibration lhs " + fmt("%.15f", r.lhs) + " rhs " + fmt("%.15f", r.rhs) + ", " + std::to_string(passed) +
                  "/100 random checks pass"};
}

Outcome closing() {
  bool ok = true;
  double worst_rel = 0.0, min_ratio = INFINITY;
  for (int n = 4; n <= 10; ++n) {
    const auto r = closing_chain(n);
    ok = ok && r.pass && r.chain_value > r.conjecture_value;
    worst_rel = std::max(worst_rel, std::abs(r.c_quadrature - r.c_closed) / r.c_closed);
    min_ratio = std::min(min_ratio, r.chain_value / r.conjecture_value);
  }
  return {ok && worst_rel <= 1e-12, "C(n) routes agree to " + fmt("%.1e", worst_rel) + ", smallest chain/conjecture ratio " +
                                        fmt("%.3f", min_ratio)};
}

Outcome property_suite(Clock::time_point started) {
  int failures = 0;
  CounterRng rng(1100, 0);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto p = random_shell_body(rng.uniform_int(2, 10), ShellConstraint::for_exponent(4), seed);
    const auto q = polar(p);
    failures += hausdorff(polar(q), p) > 1e-12;
    const double t = rng.uniform(0.0, 2 * kPi);
    failures += std::abs(radial(q, t) * support(p, t) - 1.0) > 1e-12;
    const int n = rng.uniform_int(2, 6);
    const auto m = make_measure(n, rng.uniform(0.0, kPi));
    const double a = rng.uniform(0.0, 2 * kPi), l1 = rng.uniform(0.01, 1.5), l2 = rng.uniform(0.01, 1.5);
    const double whole = sector_measure(p, m, make_interval(a, l1 + l2));
    const double first = sector_measure(p, m, make_interval(a, l1));
    failures += std::abs(whole - first - sector_measure(p, m, make_interval(a + l1, l2))) > 1e-12 * std::max(1.0, whole);
    failures += first > whole + 1e-15;
    const double c = rng.uniform(0.5, 2.0);
    const double full = full_measure(p, m);
    failures += std::abs(full_measure(scale(p, c), m) - std::pow(c, n + 1) * full) > 1e-11 * std::pow(c, n + 1) * full;
  }
  for (int k = 1; k <= 4; ++k) {
    const auto f = SampledFunction::sample([k](double t) { return std::pow(std::cos(t - 0.3), k); }, -0.8, 1.2, 257);
    failures += !sin_k_concave_check(f, k).pass;
  }
  const double secs = seconds_since(started);
  return {failures == 0 && secs < 300.0,
          std::to_string(failures) + " property failures; acceptance run time " + fmt("%.1f", secs) + " s (budget 300 s)"};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const auto started = Clock::now();
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& run) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("raised: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
  };
  report(1, "circle calibration", circle_calibration);
  report(2, "floor over random triples", floor_respected);
  report(3, "Mahler reference values", mahler_references);
  PolytopeBatch batch;
  report(4, "lower bound chain", [&] {
    batch = random_polytopes();
    return bound_chain(batch);
  });
  report(5, "Blaschke-Santalo ceiling", [&] { return santalo_ceiling(batch); });
  report(6, "alpha equals alpha1", alpha_equals_alpha1);
  report(7, "localization positivity", localization);
  report(8, "needle calibration", needle_calibration);
  report(9, "Saint-Raymond calibration", saint_raymond);
  report(10, "closing chain", closing);
  report(11, "property suites", [&] { return property_suite(started); });
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
