#include <filesystem>
#include <random>
#include <set>

#include <unistd.h>

#include <gtest/gtest.h>

#include "dlcss/dataset_io.hpp"

namespace {

namespace fs = std::filesystem;
using dlcss::GridGraph;
using dlcss::GridParams;
using dlcss::RoutePool;

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("dlcss_test_" + std::to_string(::getpid()) + "_" + name);
}

void expect_close_pools(const RoutePool& a, const RoutePool& b) {
  ASSERT_EQ(a.routes.size(), b.routes.size());
  EXPECT_EQ(a.metadata, b.metadata);
  for (std::size_t k = 0; k < a.routes.size(); ++k) {
    EXPECT_EQ(a.routes[k].id(), b.routes[k].id());
    ASSERT_EQ(a.routes[k].size(), b.routes[k].size());
    for (std::size_t i = 0; i < a.routes[k].size(); ++i) {
      EXPECT_NEAR(a.routes[k][i].lat, b.routes[k][i].lat, 5.1e-8);
      EXPECT_NEAR(a.routes[k][i].lon, b.routes[k][i].lon, 5.1e-8);
    }
  }
}

TEST(GeneratePool, SingleRouteRespectsMinimumLength) {
  const auto g = GridGraph::generate(GridParams{});
  const auto pool = dlcss::generate_pool(g, 1, 3, 2000.0);
  ASSERT_EQ(pool.routes.size(), 1u);
  EXPECT_GE(dlcss::route_length(pool.routes[0]), 2000.0);
}

TEST(GeneratePool, DeterministicPerSeed) {
  const auto g = GridGraph::generate(GridParams{});
  EXPECT_EQ(dlcss::generate_pool(g, 30, 17, 500.0), dlcss::generate_pool(g, 30, 17, 500.0));
  EXPECT_NE(dlcss::generate_pool(g, 30, 17, 500.0), dlcss::generate_pool(g, 30, 18, 500.0));
}

TEST(GeneratePool, DefaultSizedPool) {
  const auto g = GridGraph::generate(GridParams{});
  const auto pool = dlcss::generate_pool(g, 180, 7, 1000.0);
  ASSERT_EQ(pool.routes.size(), 180u);
  std::set<std::string> ids;
  for (const auto& r : pool.routes) {
    ids.insert(r.id());
    EXPECT_GE(dlcss::route_length(r), 1000.0);
  }
  EXPECT_EQ(ids.size(), 180u);
  EXPECT_EQ(pool.metadata["seed"], 7);
  EXPECT_EQ(pool.metadata["grid"]["rows"], 20);
}

TEST(GeneratePool, UnattainableLengthFails) {
  const auto g = GridGraph::generate(GridParams{});
  EXPECT_THROW(dlcss::generate_pool(g, 1, 1, 1e7), dlcss::DomainError);
  EXPECT_THROW(dlcss::generate_pool(g, 0, 1, 0.0), dlcss::DomainError);
}

TEST(GeoJson, EmptyPool) {
  const auto doc = dlcss::to_geojson(RoutePool{});
  EXPECT_EQ(doc["type"], "FeatureCollection");
  EXPECT_TRUE(doc["features"].empty());
  EXPECT_TRUE(dlcss::pool_from_geojson(doc).routes.empty());
}

TEST(GeoJson, CoordinateOrderIsLonLat) {
  RoutePool pool;
  pool.routes.emplace_back("x", std::vector<dlcss::Coordinate>{{50.1, 6.2}, {50.3, 6.4}});
  const auto doc = dlcss::to_geojson(pool);
  EXPECT_EQ(doc["features"][0]["geometry"]["coordinates"][0][0], 6.2);
  EXPECT_EQ(doc["features"][0]["geometry"]["coordinates"][0][1], 50.1);
  EXPECT_EQ(doc["features"][0]["properties"]["id"], "x");
}

TEST(GeoJson, FileRoundTripAndIdempotence) {
  const auto g = GridGraph::generate(GridParams{});
  const auto pool = dlcss::generate_pool(g, 25, 4, 0.0);
  const auto path = temp_file("pool.geojson");
  dlcss::write_geojson(pool, path);
  const auto once = dlcss::read_geojson(path);
  expect_close_pools(pool, once);
  const std::string first_text = dlcss::read_text(path);
  dlcss::write_geojson(once, path);
  EXPECT_EQ(dlcss::read_text(path), first_text);
  EXPECT_EQ(dlcss::read_geojson(path), once);
  fs::remove(path);
}

TEST(GeoJson, ParseErrorsCarryFeatureIndex) {
  auto good = dlcss::to_geojson(
      RoutePool{{dlcss::Route("a", {{50.0, 6.0}, {50.1, 6.0}}),
                 dlcss::Route("b", {{50.0, 6.0}, {50.1, 6.0}})},
                {}});
  const auto expect_error_at = [](const nlohmann::json& doc, std::size_t index) {
    try {
      dlcss::pool_from_geojson(doc);
      ADD_FAILURE() << "expected ParseError";
    } catch (const dlcss::ParseError& e) {
      EXPECT_EQ(e.location(), index) << e.what();
    }
  };
  auto missing_id = good;
  missing_id["features"][1]["properties"].erase("id");
  expect_error_at(missing_id, 1);

  auto point = good;
  point["features"][1]["geometry"] = {{"type", "Point"}, {"coordinates", {6.0, 50.0}}};
  expect_error_at(point, 1);

  auto short_line = good;
  short_line["features"][0]["geometry"]["coordinates"] = {{6.0, 50.0}};
  expect_error_at(short_line, 0);

  auto duplicate = good;
  duplicate["features"][1]["properties"]["id"] = "a";
  expect_error_at(duplicate, 1);

  EXPECT_THROW(dlcss::pool_from_geojson(nlohmann::json::array()), dlcss::ParseError);
}

TEST(GeoJson, MalformedFileAndMissingFile) {
  const auto path = temp_file("bad.geojson");
  dlcss::write_text(path, "{ not json");
  EXPECT_THROW(dlcss::read_geojson(path), dlcss::ParseError);
  fs::remove(path);
  EXPECT_THROW(dlcss::read_geojson(path), dlcss::IoError);
}

}  // namespace
