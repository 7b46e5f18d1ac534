// Batch front end. Exit codes: 0 success or pass, 1 a checked inequality
// failed, 2 search or halving failure, 3 invalid input.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mahler/alpha.hpp"
#include "mahler/bodynd.hpp"
#include "mahler/errors.hpp"
#include "mahler/inequalities.hpp"
#include "mahler/io.hpp"
#include "mahler/localize.hpp"
#include "mahler/rng.hpp"

namespace {

using namespace mahler;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitSearch = 2;
constexpr int kExitInput = 3;

struct Common {
  std::string out_dir;
  std::uint64_t seed = 1;
  int quad_nodes = 0;  // 0 keeps the module default
  long mc_samples = 0;
};

void emit(const Common& common, const std::string& name, const std::string& text) {
  std::cout << text;
  if (!common.out_dir.empty()) write_text_file((std::filesystem::path(common.out_dir) / name).string(), text);
}

bool is_file(const std::string& s) { return std::filesystem::is_regular_file(s); }

SymmetricPolygon2 load_polygon(const std::string& source, int n, std::uint64_t seed) {
  if (source == "circle256") return circle_polygon(256);
  if (source == "square") {
    const std::vector<Vec2> pts{{1, 1}, {-1, 1}};
    return make_polygon(pts);
  }
  if (source == "random") return random_shell_body(4, ShellConstraint::for_exponent(n), seed);
  if (is_file(source)) return polygon_from_json(read_json_file(source));
  fail(ErrorKind::InvalidArgument, "unknown polygon '" + source + "' (circle256, square, random or a JSON file)");
}

BodyND load_body(const std::string& source, int n, std::uint64_t seed, int points) {
  if (source == "cube") return cube(n);
  if (source == "cube3") return cube(3);
  if (source == "cross") return cross_polytope(n);
  if (source == "ball") return ball(n);
  if (source == "random") return random_symmetric_polytope(n, points > 0 ? points : 3 * n, seed);
  if (is_file(source)) return body_from_json(read_json_file(source));
  fail(ErrorKind::InvalidArgument, "unknown body '" + source + "' (cube, cube3, cross, ball, random or a JSON file)");
}

// ---- alpha ---------------------------------------------------------------

struct AlphaArgs {
  int n = 4;
  std::string body = "circle256";
  std::optional<double> theta;
  double start = 0.0;
  double length = 0.5;
  bool alpha1 = false;
  bool search = false;
  std::string config;
  int restarts = 8;
  int budget = 40;
  std::vector<int> vertex_pairs{4, 6, 8};
  double ell_min = 1e-3;
};

int run_alpha(const AlphaArgs& a, const Common& common) {
  AlphaOptions opt;
  opt.ell_min = a.ell_min;
  if (common.quad_nodes > 0) opt.interval_grid = common.quad_nodes;
  Json report;
  if (a.search) {
    AlphaSearchConfig cfg;
    if (!a.config.empty()) {
      cfg = search_config_from_json(read_json_file(a.config));
    } else {
      cfg.n = a.n;
      cfg.restarts = a.restarts;
      cfg.budget = a.budget;
      cfg.vertex_pairs = a.vertex_pairs;
      cfg.seed = common.seed;
      cfg.ell_min = a.ell_min;
    }
    opt.ell_min = cfg.ell_min;
    const AlphaSearchResult r = alpha_search(cfg, opt);
    report = {{"command", "alpha"}, {"mode", "search"}, {"config", to_json(cfg)}, {"result", to_json(r)}};
  } else {
    require(a.n >= kAlphaMinExponent, "--n must be >= " + std::to_string(kAlphaMinExponent));
    const SymmetricPolygon2 s = load_polygon(a.body, a.n, common.seed);
    require_shell_body(a.n, s);
    report = {{"command", "alpha"}, {"n", a.n}, {"body", polygon_to_json(s)}};
    if (a.theta) {
      report["mode"] = "term";
      report["term"] = to_json(alpha_term(a.n, *a.theta, make_interval(a.start, a.length), s));
    } else {
      report["mode"] = a.alpha1 ? "alpha_n_S and alpha1_n_S" : "alpha_n_S";
      report["alpha_n_S"] = to_json(alpha_n_S(a.n, s, opt));
      if (a.alpha1) report["alpha1_n_S"] = to_json(alpha1_n_S(a.n, s, opt));
    }
    report["lower_floor"] = lemma_floor(a.n);
    report["upper_circle"] = 1.0 / ((a.n + 1.0) * (a.n + 1.0));
    report["statement"] = "alpha(n, S) = max_theta min_I mu(C(I) cap S) mu(C(I) cap S polar) / (int_I g)^2";
  }
  emit(common, "alpha.json", dump(report));
  return kExitPass;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  int n = 4;
  std::string body = "cube";
  int count = 1;
  int points = 0;
  std::string alpha_source = "lemma_floor";
};

// The bound in dimension n uses the planar constant at exponent n - 1.
double alpha_from_source(const std::string& source, int n) {
  if (source == "lemma_floor") return lemma_floor(n - 1);
  const Json j = read_json_file(source);
  if (j.is_number()) return j.get<double>();
  if (j.contains("alpha_hat") && j["alpha_hat"].is_number()) return j["alpha_hat"].get<double>();
  if (j.contains("result") && j["result"].contains("alpha_hat")) return j["result"]["alpha_hat"].get<double>();
  fail(ErrorKind::InvalidArgument, "'" + source + "' carries no alpha_hat");
}

int run_verify(const VerifyArgs& a, const Common& common) {
  require(a.count >= 1, "--count must be >= 1");
  const double alpha = alpha_from_source(a.alpha_source, a.n);
  const long samples = common.mc_samples > 0 ? common.mc_samples : (a.body == "random" ? 20000 : 1000000);
  Json bodies = Json::array();
  int passed = 0;
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t seed = a.count == 1 ? common.seed : splitmix64(common.seed + static_cast<std::uint64_t>(i));
    const BodyND k = load_body(a.body, a.n, seed, a.points);
    require(k.dim() == a.n || a.body == "cube3", "body dimension differs from --n");
    const SphereSample sample = SphereSample::halton(k.dim(), static_cast<std::size_t>(samples), seed);
    const MahlerEstimate est = mahler_product(k, sample);
    const BoundReport lower = verify_main(est, k.dim(), alpha);
    const BoundReport upper = santalo_check(est, k.dim());
    const bool ok = lower.pass && upper.pass;
    passed += ok;
    Json entry{{"seed", seed}, {"dim", k.dim()}, {"estimate", to_json(est)}, {"lower", to_json(lower)},
               {"upper", to_json(upper)}, {"pass", ok}};
    try {
      entry["exact_reference"] = exact_reference(a.body == "cross" ? "cross_polytope" : a.body, k.dim());
    } catch (const Error&) {
      // No closed form for this family.
    }
    bodies.push_back(std::move(entry));
  }
  const double via_beta = beta_bound(a.n, lemma_floor(a.n - 1));
  const double via_remark = remark_bound(a.n);
  const bool routes_agree = std::abs(via_beta - via_remark) <= 1e-10 * via_remark;
  Json report{{"command", "verify"},
              {"n", a.n},
              {"body", a.body},
              {"alpha", alpha},
              {"mc_samples", samples},
              {"bound_routes", {{"beta_bound_at_floor", via_beta}, {"remark_bound", via_remark}, {"agree", routes_agree},
                                {"statement", "4 pi^n / (n^{(n+4)/2} Gamma(n/2)^2) = alpha_floor vol(S^{n-1})^2"}}},
              {"bodies", std::move(bodies)},
              {"summary", std::to_string(passed) + "/" + std::to_string(a.count) + " pass"}};
  emit(common, "verify.json", dump(report));
  return passed == a.count && routes_agree ? kExitPass : kExitFail;
}

// ---- localize ------------------------------------------------------------

struct LocalizeArgs {
  std::string body = "cube3";
  int n = 3;
  int steps = 5;
  std::string policy = "free";
  bool pancake = false;
  std::string target = "equator";
  double margin = 0.1;
  int grid_level = 6;
};

GeodesicArc target_arc(const std::string& name) {
  if (name == "equator") return GeodesicArc::through(Vec3::UnitX(), Vec3::UnitY());
  if (name == "meridian") return GeodesicArc::through(Vec3::UnitX(), Vec3::UnitZ());
  fail(ErrorKind::InvalidArgument, "unknown target '" + name + "' (equator or meridian)");
}

// Needle on S^2 placed in the first three coordinates of R^dim.
SphericalNeedle embed_needle(const SphericalNeedle& needle, int dim) {
  Eigen::VectorXd start = Eigen::VectorXd::Zero(dim), tangent = Eigen::VectorXd::Zero(dim);
  start.head(3) = needle.start;
  tangent.head(3) = needle.tangent;
  return make_spherical_needle(start, tangent, needle.length(), std::max(1, dim - 2), needle.density.t0);
}

int run_localize(const LocalizeArgs& a, const Common& common) {
  if (a.pancake) {
    const GeodesicArc target = target_arc(a.target);
    const CutSequence seq = axis_cut_sequence(SphericalRegion{}, target, a.steps);
    Json report{{"command", "localize"}, {"mode", "pancake"}, {"target", a.target}, {"widths", seq.widths},
                {"pancake", to_json(seq.pancake)}};
    const bool thin = seq.pancake.width < kPancakeMaxWidth;
    if (thin) {
      const SphericalNeedle needle = extract_needle(seq.pancake, 1);
      report["needle"] = to_json(needle);
      const BodyND k = load_body(a.body, a.n, common.seed, 0);
      require(k.dim() == 3 || k.dim() == 4, "needle products need a body in dimension 3 or 4");
      const SphericalNeedle placed = k.dim() == 3 ? needle : embed_needle(needle, k.dim());
      report["needle_product"] = to_json(needle_product(k, placed));
    }
    report["pass"] = thin;
    emit(common, "localize.json", dump(report));
    return thin ? kExitPass : kExitFail;
  }
  const BodyND k = load_body(a.body, 3, common.seed, 0);
  require(k.dim() == 3, "cut_iterate needs a body in dimension 3");
  const MahlerG g = mahler_g(k, a.margin);
  const GridFunctions gf = GridFunctions::sample(g.g1, g.g2, IcosaGrid::shared(a.grid_level));
  CutPolicy policy = CutPolicy::free();
  if (a.policy == "orthogonal") policy = CutPolicy::orthogonal_to(Vec3::UnitZ());
  else require(a.policy == "free", "--policy must be free or orthogonal");
  Json report{{"command", "localize"}, {"mode", "partition"}, {"body", a.body}, {"steps", a.steps},
              {"policy", a.policy}, {"c", g.c}, {"a", g.a},
              {"statement", "G1 = C - rho_K^3/3, G2 = A - C rho_{K polar}^3/3 halved by every cut"}};
  try {
    require(a.steps <= 12, "--steps must lie in [0, 12] for the partition");
    const auto leaves = cut_iterate(gf, a.steps, policy);
    Json dumped = Json::array();
    bool positive = true;
    for (const auto& leaf : leaves) {
      dumped.push_back(to_json(leaf));
      positive = positive && leaf.masses.g1 > 0 && leaf.masses.g2 > 0;
    }
    report["leaves"] = std::move(dumped);
    report["all_positive"] = positive;
    emit(common, "localize.json", dump(report));
    return positive ? kExitPass : kExitFail;
  } catch (const HalvingError& e) {
    Json partial = Json::array();
    for (const auto& r : e.partial()) partial.push_back(to_json(r));
    report["error"] = e.what();
    report["best_residual"] = e.residual();
    report["partial_regions"] = std::move(partial);
    emit(common, "localize.json", dump(report));
    std::cerr << e.what() << '\n';
    return kExitSearch;
  }
}

// ---- ineq ----------------------------------------------------------------

struct IneqArgs {
  bool saint_raymond = false;
  bool frad = false;
  bool shadow = false;
  bool chain = false;
  int count = 50;
  int n = 4;
  std::vector<double> m{1.0, 1.0};
};

int run_ineq(const IneqArgs& a, const Common& common) {
  require(a.saint_raymond || a.frad || a.shadow || a.chain, "choose --saint-raymond, --frad, --shadow or --chain");
  require(a.m.size() == 2, "--m takes exactly two values");
  int code = kExitPass;
  if (a.saint_raymond) {
    const auto rows = saint_raymond_batch(a.count, common.seed, {a.m[0], a.m[1]});
    emit(common, "saint_raymond.csv", rows_to_csv(rows));
    int passed = 0;
    for (const auto& r : rows) passed += r.pass;
    std::cerr << "saint-raymond: " << passed << "/" << rows.size() << " pass\n";
    if (passed != a.count) code = kExitFail;
  }
  if (a.frad) {
    const auto rows = frad_batch(a.count, a.n, common.seed);
    emit(common, "frad.csv", rows_to_csv(rows));
    int below = 0;
    for (const auto& r : rows) below += r.margin < 0;
    std::cerr << "frad (exploratory): " << below << "/" << rows.size() << " below 1/n\n";
  }
  if (a.shadow) {
    const auto rows = shadow_batch(a.count, a.n, common.seed);
    emit(common, "shadow.csv", rows_to_csv(rows));
    int plus = 0, minus = 0, primal = 0;
    for (const auto& r : rows) {
      plus += r.sign > 0;
      minus += r.sign < 0;
      primal += r.pass;
    }
    std::cerr << "shadow: polar sign +" << plus << " -" << minus << ", primal monotonicity " << primal << "/" << rows.size()
              << "\n";
    if (primal != a.count) code = kExitFail;
  }
  if (a.chain) {
    const ChainReport r = closing_chain(a.n);
    emit(common, "chain.json", dump(to_json(r)));
    if (!r.pass) code = kExitFail;
  }
  return code;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SearchFailed:
    case ErrorKind::HalvingFailed:
    case ErrorKind::PlaneSearchFailed:
    case ErrorKind::GenerationFailed:
    case ErrorKind::NormalizationFailed:
      return kExitSearch;
    default:
      return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mahler volume lower-bound toolkit"};
  app.require_subcommand(1);
  // Global options are accepted after the subcommand name as well.
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out_dir, "Directory for report artifacts");
  app.add_option("--seed", common.seed, "Run seed");
  app.add_option("--quad-nodes", common.quad_nodes, "Interval grid points per axis for alpha minimization")->check(CLI::Range(4, 4096));
  app.add_option("--mc-samples", common.mc_samples, "Sphere samples for Monte Carlo volumes")->check(CLI::Range(2L, 100000000L));

  AlphaArgs alpha;
  auto* alpha_cmd = app.add_subcommand("alpha", "Evaluate or search the alpha functional");
  alpha_cmd->add_option("--n", alpha.n, "Exponent n")->check(CLI::Range(2, 12));
  alpha_cmd->add_option("--body", alpha.body, "circle256, square, random or a polygon JSON file");
  alpha_cmd->add_option("--theta", alpha.theta, "Evaluate a single term at this theta");
  alpha_cmd->add_option("--start", alpha.start, "Interval start for --theta");
  alpha_cmd->add_option("--length", alpha.length, "Interval length for --theta");
  alpha_cmd->add_flag("--alpha1", alpha.alpha1, "Also compute the anchored variant");
  alpha_cmd->add_flag("--search", alpha.search, "Minimize over bodies");
  alpha_cmd->add_option("--config", alpha.config, "Search configuration JSON");
  alpha_cmd->add_option("--restarts", alpha.restarts)->check(CLI::Range(1, 10000));
  alpha_cmd->add_option("--budget", alpha.budget)->check(CLI::Range(0, 100000));
  alpha_cmd->add_option("--vertex-pairs", alpha.vertex_pairs)->delimiter(',');
  alpha_cmd->add_option("--ell-min", alpha.ell_min)->check(CLI::Range(1e-8, 1.0));

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check the Mahler product bounds");
  verify_cmd->add_option("--n", verify.n, "Dimension")->check(CLI::Range(2, 10));
  verify_cmd->add_option("--body", verify.body, "cube, cross, ball, random, cube3 or a body JSON file");
  verify_cmd->add_option("--count", verify.count, "Number of random bodies")->check(CLI::Range(1, 100000));
  verify_cmd->add_option("--points", verify.points, "Vertex count of random polytopes")->check(CLI::Range(2, 100000));
  verify_cmd->add_option("--alpha", verify.alpha_source, "lemma_floor or a JSON file with alpha_hat at exponent n - 1");

  LocalizeArgs localize;
  auto* localize_cmd = app.add_subcommand("localize", "Halving partitions, pancakes and needles on the sphere");
  localize_cmd->add_option("--body", localize.body, "cube3, ball, cube or a body JSON file");
  localize_cmd->add_option("--n", localize.n, "Dimension of built-in bodies")->check(CLI::Range(3, 4));
  localize_cmd->add_option("--steps", localize.steps, "Halving rounds, or cuts with --pancake")->check(CLI::Range(0, 200));
  localize_cmd->add_option("--policy", localize.policy, "free or orthogonal");
  localize_cmd->add_flag("--pancake", localize.pancake, "Run the axis cut sequence");
  localize_cmd->add_option("--target", localize.target, "equator or meridian");
  localize_cmd->add_option("--margin", localize.margin, "Relative offset margin for G1, G2")->check(CLI::Range(1e-6, 10.0));
  localize_cmd->add_option("--grid-level", localize.grid_level, "Icosahedral subdivision level")->check(CLI::Range(2, 7));

  IneqArgs ineq;
  auto* ineq_cmd = app.add_subcommand("ineq", "Planar inequality batches");
  ineq_cmd->add_flag("--saint-raymond", ineq.saint_raymond, "Moment inequality on unconditional polygons");
  ineq_cmd->add_flag("--frad", ineq.frad, "Exploratory mu_2 product test");
  ineq_cmd->add_flag("--shadow", ineq.shadow, "Unconditionalization probe");
  ineq_cmd->add_flag("--chain", ineq.chain, "Closing constant chain");
  ineq_cmd->add_option("--count", ineq.count, "Bodies per batch")->check(CLI::Range(0, 1000000));
  ineq_cmd->add_option("--n", ineq.n, "Exponent n")->check(CLI::Range(4, 40));
  ineq_cmd->add_option("--m", ineq.m, "Moment vector m1,m2")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*alpha_cmd) return run_alpha(alpha, common);
    if (*verify_cmd) return run_verify(verify, common);
    if (*localize_cmd) return run_localize(localize, common);
    if (*ineq_cmd) return run_ineq(ineq, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
