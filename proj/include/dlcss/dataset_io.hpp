#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dlcss/errors.hpp"
#include "dlcss/geo.hpp"
#include "dlcss/routing_oracle.hpp"

namespace dlcss {

struct RoutePool {
  std::vector<Route> routes;
  nlohmann::json metadata = nlohmann::json::object();

  friend bool operator==(const RoutePool&, const RoutePool&) = default;
};

inline std::string route_id(std::size_t k, std::size_t n) {
  std::string digits = std::to_string(k);
  const std::size_t width = std::max<std::size_t>(4, std::to_string(n ? n - 1 : 0).size());
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "route-" + digits;
}

/// Default lower bound on generated route length.
inline constexpr double kDefaultMinRouteLengthM = 1000.0;

/// Pool sampling seed derived from a run's single seed, decorrelated from
/// the graph generator that consumes the seed directly.
constexpr std::uint64_t pool_seed(std::uint64_t run_seed) noexcept {
  return run_seed + 0x9E3779B97F4A7C15ULL;
}

/// Attempts allowed per route before min_length_m is declared unattainable.
inline constexpr std::size_t kMaxDrawsPerRoute = 1000;

/// `n` shortest routes between uniformly drawn distinct nodes, each at least
/// `min_length_m` long. Deterministic for a given seed.
inline RoutePool generate_pool(const GridGraph& g, std::size_t n, std::uint64_t seed,
                               double min_length_m) {
  if (n < 1) throw DomainError("pool size must be >= 1");
  if (!(min_length_m >= 0.0)) throw DomainError("min_length_m must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, g.node_count() - 1);

  RoutePool pool;
  pool.routes.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    bool done = false;
    for (std::size_t draw = 0; draw < kMaxDrawsPerRoute && !done; ++draw) {
      const NodeId s = pick(rng);
      const NodeId d = pick(rng);
      if (s == d) continue;
      Route r = shortest_route(g, g.coordinate(s), g.coordinate(d), route_id(k, n));
      if (route_length(r) >= min_length_m) {
        pool.routes.push_back(std::move(r));
        done = true;
      }
    }
    if (!done) {
      throw DomainError("could not draw a route of at least " + std::to_string(min_length_m) +
                        " m after " + std::to_string(kMaxDrawsPerRoute) + " attempts");
    }
  }
  const auto& p = g.params();
  pool.metadata = {{"generator", "grid-shortest-path"},
                   {"seed", seed},
                   {"n", n},
                   {"min_length_m", min_length_m},
                   {"grid",
                    {{"rows", p.rows},
                     {"cols", p.cols},
                     {"origin", {{"lat", p.origin.lat}, {"lon", p.origin.lon}}},
                     {"spacing_m", p.spacing_m},
                     {"removal_fraction", p.removal_fraction},
                     {"seed", p.seed}}}};
  return pool;
}

/// Coordinate rounding applied on write (7 decimal places, about 1 cm).
inline double round_coordinate(double deg) { return std::round(deg * 1e7) / 1e7; }

inline nlohmann::json to_geojson(const RoutePool& pool) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& r : pool.routes) {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& p : r.points()) {
      coords.push_back({round_coordinate(p.lon), round_coordinate(p.lat)});
    }
    features.push_back({{"type", "Feature"},
                        {"properties", {{"id", r.id()}}},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}});
  }
  return {{"type", "FeatureCollection"},
          {"properties", pool.metadata},
          {"features", std::move(features)}};
}

inline RoutePool pool_from_geojson(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("document is not a GeoJSON FeatureCollection", 0);
  }
  RoutePool pool;
  if (doc.contains("properties") && doc["properties"].is_object()) {
    pool.metadata = doc["properties"];
  }
  std::unordered_set<std::string> seen;
  const auto& features = doc["features"];
  for (std::size_t k = 0; k < features.size(); ++k) {
    const auto& f = features[k];
    const auto fail = [k](const std::string& why) -> ParseError {
      return ParseError("feature " + std::to_string(k) + ": " + why, k);
    };
    if (!f.is_object()) throw fail("not an object");
    const auto props = f.find("properties");
    if (props == f.end() || !props->is_object() || !props->contains("id")) {
      throw fail("missing properties.id");
    }
    const auto& id_json = (*props)["id"];
    const std::string id = id_json.is_string() ? id_json.get<std::string>() : id_json.dump();
    if (!seen.insert(id).second) throw fail("duplicate id '" + id + "'");
    const auto geom = f.find("geometry");
    if (geom == f.end() || !geom->is_object() || geom->value("type", "") != "LineString") {
      throw fail("geometry is not a LineString");
    }
    const auto coords = geom->find("coordinates");
    if (coords == geom->end() || !coords->is_array()) throw fail("missing coordinates");
    if (coords->size() < 2) throw fail("LineString needs at least 2 coordinates");
    std::vector<Coordinate> pts;
    for (const auto& c : *coords) {
      if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
        throw fail("coordinate is not a [lon, lat] pair");
      }
      Coordinate p{c[1].get<double>(), c[0].get<double>()};
      if (!is_valid(p)) throw fail("coordinate out of range");
      pts.push_back(p);
    }
    pool.routes.emplace_back(id, std::move(pts));
  }
  return pool;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

inline void write_geojson(const RoutePool& pool, const std::filesystem::path& path) {
  write_text(path, to_geojson(pool).dump(1) + "\n");
}

inline RoutePool read_geojson(const std::filesystem::path& path) {
  return pool_from_geojson(read_json(path));
}

}  // namespace dlcss
