#include "mahler/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mahler/errors.hpp"

namespace mahler {
namespace {

double number_at(const Json& j, std::size_t i, const char* what) {
  if (!j.is_array() || i >= j.size() || !j[i].is_number())
    fail(ErrorKind::InvalidArgument, std::string(what) + ": expected a number at index " + std::to_string(i));
  return j[i].get<double>();
}

Eigen::MatrixXd matrix_from_json(const Json& j, int dim, const char* what) {
  if (!j.is_array()) fail(ErrorKind::InvalidArgument, std::string(what) + " must be an array of rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), dim);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(dim))
      fail(ErrorKind::InvalidArgument, std::string(what) + ": row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c) m(static_cast<Eigen::Index>(r), c) = number_at(j[r], static_cast<std::size_t>(c), what);
  }
  return m;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json interval_to_json(const ConeInterval& i) { return {{"start", i.start}, {"length", i.length}}; }

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

SymmetricPolygon2 polygon_from_json(const Json& j) {
  if (!j.is_array() || j.size() < 2) fail(ErrorKind::InvalidArgument, "polygon must be an array of at least two [x, y] pairs");
  std::vector<Vec2> pts;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 2) fail(ErrorKind::InvalidArgument, "polygon vertices must be [x, y] pairs");
    pts.push_back({number_at(row, 0, "polygon"), number_at(row, 1, "polygon")});
  }
  return make_polygon(pts);
}

Json polygon_to_json(const SymmetricPolygon2& p) {
  Json out = Json::array();
  for (const Vec2& v : p.half()) out.push_back({v.x, v.y});
  return out;
}

BodyND body_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
    fail(ErrorKind::InvalidArgument, "body must be an object with an integer 'dim'");
  const int dim = j["dim"].get<int>();
  if (dim < 2 || dim > 10) fail(ErrorKind::InvalidArgument, "body dimension must lie in [2, 10]");
  if (j.contains("ellipsoid")) {
    const Eigen::MatrixXd l = matrix_from_json(j["ellipsoid"], dim, "ellipsoid");
    if (l.rows() != dim) fail(ErrorKind::InvalidArgument, "ellipsoid must be a square matrix");
    return BodyND::from_ellipsoid(l);
  }
  const bool has_v = j.contains("vertices"), has_f = j.contains("facets");
  if (has_v && has_f)
    return BodyND::from_both(matrix_from_json(j["vertices"], dim, "vertices"), matrix_from_json(j["facets"], dim, "facets"));
  if (has_v) return BodyND::from_vertices(matrix_from_json(j["vertices"], dim, "vertices"));
  if (has_f) return BodyND::from_facets(matrix_from_json(j["facets"], dim, "facets"));
  fail(ErrorKind::InvalidArgument, "body needs 'vertices', 'facets' or 'ellipsoid'");
}

Json body_to_json(const BodyND& k) {
  Json out{{"dim", k.dim()}};
  if (k.is_ellipsoid()) {
    out["ellipsoid"] = matrix_to_json(k.ellipsoid());
    return out;
  }
  if (k.has_vertices()) out["vertices"] = matrix_to_json(k.vertices());
  if (k.has_facets()) out["facets"] = matrix_to_json(k.facets());
  return out;
}

AlphaSearchConfig search_config_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, "search configuration must be an object");
  AlphaSearchConfig c;
  c.n = field_or(j, "n", c.n);
  c.vertex_pairs = field_or(j, "vertex_pairs", c.vertex_pairs);
  c.restarts = field_or(j, "restarts", c.restarts);
  c.budget = field_or(j, "budget", c.budget);
  c.seed = field_or(j, "seed", c.seed);
  c.ell_min = field_or(j, "ell_min", c.ell_min);
  c.include_circle = field_or(j, "include_circle", c.include_circle);
  return c;
}

Json to_json(const AlphaSearchConfig& c) {
  return {{"n", c.n},           {"vertex_pairs", c.vertex_pairs}, {"restarts", c.restarts},
          {"budget", c.budget}, {"seed", c.seed},                 {"ell_min", c.ell_min},
          {"include_circle", c.include_circle}};
}

Json to_json(const AlphaEvaluation& e) {
  return {{"n", e.n},
          {"theta", e.theta},
          {"interval", interval_to_json(e.interval)},
          {"value", e.value},
          {"numerator_left", e.numerator_left},
          {"numerator_right", e.numerator_right},
          {"denominator", e.denominator}};
}

Json to_json(const AlphaWitness& w) {
  return {{"theta", w.theta}, {"interval", interval_to_json(w.interval)}, {"value", w.value}};
}

Json to_json(const AlphaSearchResult& r) {
  Json trace = Json::array();
  for (const auto& [it, v] : r.search_trace) trace.push_back({it, v});
  return {{"n", r.n},
          {"alpha_hat", r.alpha_hat},
          {"witness",
           {{"body", polygon_to_json(r.argmin_body)},
            {"theta", r.argmax_theta},
            {"interval", interval_to_json(r.argmin_interval)}}},
          {"lower_floor", lemma_floor(r.n)},
          {"upper_circle", 1.0 / ((r.n + 1.0) * (r.n + 1.0))},
          {"trace", std::move(trace)}};
}

Json to_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

Json to_json(const MahlerEstimate& e) {
  return {{"value", e.value}, {"se", e.se}, {"volume", to_json(e.volume)}, {"polar_volume", to_json(e.polar_volume)}};
}

Json to_json(const BoundReport& r) {
  return {{"product", r.product}, {"se", r.se},     {"bound", r.bound},
          {"margin", r.margin},   {"pass", r.pass}, {"statement", r.statement}};
}

Json to_json(const SaintRaymondReport& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"pass", r.pass}, {"statement", r.statement}};
}

Json to_json(const FradReport& r) {
  return {{"product", r.product}, {"bound", r.bound}, {"margin", r.margin}, {"statement", r.statement}};
}

Json to_json(const ShadowReport& r) {
  return {{"mu2_polar_p", r.mu2_polar_p}, {"mu2_polar_u", r.mu2_polar_u}, {"sign", r.sign},
          {"mu2_p", r.mu2_p},             {"mu2_u", r.mu2_u},             {"primal_holds", r.primal_holds}};
}

Json to_json(const ChainReport& r) {
  return {{"n", r.n},
          {"c_quadrature", r.c_quadrature},
          {"c_closed", r.c_closed},
          {"chain_value", r.chain_value},
          {"printed_value", r.printed_value},
          {"conjecture_value", r.conjecture_value},
          {"pass", r.pass},
          {"statement", r.statement}};
}

Json to_json(const SphericalRegion& r) {
  Json cuts = Json::array();
  for (const Vec3& c : r.cuts) cuts.push_back({c.x(), c.y(), c.z()});
  return {{"cuts", std::move(cuts)}};
}

Json to_json(const Leaf& leaf) {
  return {{"cuts", to_json(leaf.region)["cuts"]},
          {"mass_g1", leaf.masses.g1},
          {"mass_g2", leaf.masses.g2},
          {"measure", leaf.masses.measure}};
}

Json to_json(const Pancake& p) {
  const Vec3 end = p.axis.at(p.axis.length);
  return {{"cuts", to_json(p.region)["cuts"]},
          {"axis_start", {p.axis.start.x(), p.axis.start.y(), p.axis.start.z()}},
          {"axis_end", {end.x(), end.y(), end.z()}},
          {"axis_length", p.axis.length},
          {"width", p.width}};
}

Json to_json(const SphericalNeedle& n) {
  return {{"start", vector_to_json(n.start)},
          {"end", vector_to_json(n.at(n.length()))},
          {"tangent", vector_to_json(n.tangent)},
          {"length", n.length()},
          {"k", n.density.k},
          {"t0", n.density.t0},
          {"norm_constant", n.density.norm_constant}};
}

Json to_json(const NeedleProduct& p) { return {{"left", p.left}, {"right", p.right}, {"product", p.product}}; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace mahler
