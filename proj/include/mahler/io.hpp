#pragma once

// JSON and file exchange. Polygons travel as an array of [x, y] pairs holding
// one half of the vertices; bodies as {"dim", "vertices", "facets"} with
// either list optional, or {"dim", "ellipsoid"} with the matrix L of L B.

#include <string>
#include <vector>

#include <json.hpp>

#include "mahler/alpha.hpp"
#include "mahler/bodynd.hpp"
#include "mahler/inequalities.hpp"
#include "mahler/localize.hpp"

namespace mahler {

using Json = nlohmann::ordered_json;

/// Malformed input raises InvalidArgument; invalid geometry raises DegenerateBody.
SymmetricPolygon2 polygon_from_json(const Json& j);
Json polygon_to_json(const SymmetricPolygon2& p);

BodyND body_from_json(const Json& j);
Json body_to_json(const BodyND& k);

AlphaSearchConfig search_config_from_json(const Json& j);
Json to_json(const AlphaSearchConfig& c);
Json to_json(const AlphaEvaluation& e);
Json to_json(const AlphaWitness& w);
Json to_json(const AlphaSearchResult& r);
Json to_json(const Estimate& e);
Json to_json(const MahlerEstimate& e);
Json to_json(const BoundReport& r);
Json to_json(const SaintRaymondReport& r);
Json to_json(const FradReport& r);
Json to_json(const ShadowReport& r);
Json to_json(const ChainReport& r);
Json to_json(const SphericalRegion& r);
Json to_json(const Leaf& leaf);
Json to_json(const Pancake& p);
Json to_json(const SphericalNeedle& n);
Json to_json(const NeedleProduct& p);

/// Throws InvalidArgument when the file is missing or not valid JSON.
Json read_json_file(const std::string& path);
/// Creates parent directories; throws InvalidArgument on I/O failure.
void write_text_file(const std::string& path, const std::string& content);
/// Fixed formatting: two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace mahler
