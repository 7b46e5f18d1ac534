#include <gtest/gtest.h>

#include <filesystem>

#include "mahler/errors.hpp"
#include "mahler/io.hpp"

using namespace mahler;

TEST(Io, PolygonRoundTrip) {
  const auto p = random_shell_body(6, ShellConstraint::for_exponent(4), 5);
  const auto q = polygon_from_json(polygon_to_json(p));
  EXPECT_LT(hausdorff(p, q), 1e-15);
}

TEST(Io, BodyRoundTrip) {
  for (const BodyND& k : {cube(3), polar_nd(random_symmetric_polytope(3, 7, 2)), ball(4, 2.0)}) {
    const BodyND r = body_from_json(Json::parse(dump(body_to_json(k))));
    const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(k.dim(), 0.3, 1.1).normalized();
    EXPECT_NEAR(radial_nd(r, u), radial_nd(k, u), 1e-14);
  }
}

TEST(Io, MalformedInputRaises) {
  EXPECT_THROW(polygon_from_json(Json::parse("[[1, 2, 3]]")), Error);
  EXPECT_THROW(polygon_from_json(Json::parse("{\"dim\": 2}")), Error);
  EXPECT_THROW(body_from_json(Json::parse("{\"dim\": 3, \"vertices\": [[1, 0]]}")), Error);
  EXPECT_THROW(body_from_json(Json::parse("{\"dim\": 3}")), Error);
  EXPECT_THROW(search_config_from_json(Json::parse("{\"n\": \"four\"}")), Error);
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), Error);
}

TEST(Io, SearchConfigDefaultsAndOverrides) {
  const auto c = search_config_from_json(Json::parse(R"({"n": 5, "vertex_pairs": [3, 5], "seed": 9})"));
  EXPECT_EQ(c.n, 5);
  EXPECT_EQ(c.vertex_pairs, (std::vector<int>{3, 5}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.restarts, AlphaSearchConfig{}.restarts);
  EXPECT_EQ(search_config_from_json(to_json(c)).budget, c.budget);
}

TEST(Io, WriteCreatesDirectories) {
  const auto dir = std::filesystem::temp_directory_path() / "mahler_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_text_file((dir / "x.json").string(), dump(Json{{"a", 1}}));
  EXPECT_EQ(read_json_file((dir / "x.json").string())["a"], 1);
  std::filesystem::remove_all(dir.parent_path());
}
