#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "dlcss/geo.hpp"
#include "dlcss/routing_oracle.hpp"

namespace dlcss::testing {

inline constexpr double kBaseLat = 50.775;
inline constexpr double kBaseLon = 6.05;
inline constexpr double kStepDeg = 1e-3;

/// Points along a parallel of latitude: (lat, lon0 + k * step) for k in [first, last].
inline std::vector<Coordinate> along_lat(double lat, int first, int last,
                                         double lon0 = kBaseLon, double step = kStepDeg) {
  std::vector<Coordinate> pts;
  if (first <= last) {
    for (int k = first; k <= last; ++k) pts.push_back({lat, lon0 + k * step});
  } else {
    for (int k = first; k >= last; --k) pts.push_back({lat, lon0 + k * step});
  }
  return pts;
}

inline Route line_route(const std::string& id, double lat, int first, int last) {
  return Route(id, along_lat(lat, first, last));
}

/// Random polyline of `n` points inside a ~2 km box.
template <typename Rng>
Route random_route(Rng& rng, const std::string& id, std::size_t n) {
  std::uniform_real_distribution<double> lat(kBaseLat, kBaseLat + 0.02);
  std::uniform_real_distribution<double> lon(kBaseLon, kBaseLon + 0.03);
  std::vector<Coordinate> pts;
  for (std::size_t k = 0; k < n; ++k) pts.push_back({lat(rng), lon(rng)});
  return Route(id, std::move(pts));
}

/// Random walk on a coarse lattice; consecutive points are adjacent cells,
/// so neighbouring points can coincide with earlier ones.
template <typename Rng>
Route random_lattice_route(Rng& rng, const std::string& id, std::size_t n) {
  std::uniform_int_distribution<int> dir(0, 3);
  int r = 5, c = 5;
  std::vector<Coordinate> pts{{kBaseLat + r * kStepDeg, kBaseLon + c * kStepDeg}};
  while (pts.size() < n) {
    switch (dir(rng)) {
      case 0: ++r; break;
      case 1: --r; break;
      case 2: ++c; break;
      default: --c; break;
    }
    pts.push_back({kBaseLat + r * kStepDeg, kBaseLon + c * kStepDeg});
  }
  return Route(id, std::move(pts));
}

/// Two-rider scenario matrix. Row (first index) describes the request's
/// destination: 1 shared, 2 on the vehicle route, 3 leaves via a separation
/// point. Column (second index) describes its origin: 1 shared, 2 on the
/// vehicle route, 3 reached via a meeting point off the route.
struct ScenarioFixture {
  std::string name;
  Route vehicle;
  Route request;
};

inline std::vector<ScenarioFixture> scenario_fixtures() {
  const double lat = kBaseLat;
  // Meeting and separation points sit about 334 m north of the corridor,
  // two steps before the join / after the split.
  const double off = 0.003;
  const Route vehicle = line_route("A", lat, 0, 10);
  const auto make = [&](int dest_kind, int origin_kind) {
    std::vector<Coordinate> pts;
    const int first = origin_kind == 1 ? 0 : 3;
    const int last = dest_kind == 1 ? 10 : 7;
    if (origin_kind == 3) pts.push_back({lat + off, kBaseLon + (first - 2) * kStepDeg});
    for (const auto& p : along_lat(lat, first, last)) pts.push_back(p);
    if (dest_kind == 3) pts.push_back({lat + off, kBaseLon + (last + 2) * kStepDeg});
    return Route("R", std::move(pts));
  };
  std::vector<ScenarioFixture> out;
  for (int d = 1; d <= 3; ++d) {
    for (int o = 1; o <= 3; ++o) {
      out.push_back({"[" + std::to_string(d) + "," + std::to_string(o) + "]", vehicle,
                     make(d, o)});
    }
  }
  return out;
}

/// Same geometry as the vehicle corridor, shifted about 111 km north.
inline ScenarioFixture disjoint_control() {
  return {"disjoint", line_route("A", kBaseLat, 0, 10), line_route("R", kBaseLat + 1.0, 0, 10)};
}

}  // namespace dlcss::testing
