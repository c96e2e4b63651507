#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dlcss/geo.hpp"

namespace {

using dlcss::Coordinate;
using dlcss::Route;

// Great-circle distance from the chord between unit vectors; shares no
// code path with the haversine implementation.
double chord_distance(const Coordinate& a, const Coordinate& b) {
  const double k = std::numbers::pi / 180.0;
  const auto unit = [k](const Coordinate& c) {
    return std::array<long double, 3>{std::cos(c.lat * k) * std::cos(c.lon * k),
                                      std::cos(c.lat * k) * std::sin(c.lon * k),
                                      std::sin(c.lat * k)};
  };
  const auto u = unit(a), v = unit(b);
  long double chord2 = 0;
  for (int i = 0; i < 3; ++i) chord2 += (u[i] - v[i]) * (u[i] - v[i]);
  return static_cast<double>(2.0L * 6371000.0L * std::asin(std::sqrt(chord2) / 2.0L));
}

TEST(Geo, DistanceIdentityIsExactlyZero) {
  EXPECT_EQ(dlcss::distance({50.0, 6.0}, {50.0, 6.0}), 0.0);
}

TEST(Geo, MilliDegreeOfLatitude) {
  const double d = dlcss::distance({50.775, 6.083}, {50.776, 6.083});
  // R * 1e-3 deg in radians.
  EXPECT_NEAR(d, 6371000.0 * 1e-3 * std::numbers::pi / 180.0, 1e-6);
  EXPECT_NEAR(d, 111.195, 1e-3);
}

TEST(Geo, MatchesChordFormulaOnRandomPairs) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lat(-80, 80), lon(-180, 180);
  for (int k = 0; k < 1000; ++k) {
    const Coordinate a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
    const double ref = chord_distance(a, b);
    EXPECT_NEAR(dlcss::distance(a, b), ref, 1e-6 * std::max(1.0, ref));
  }
}

TEST(Geo, SymmetryAndTriangleInequality) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(50.7, 50.8), lon(6.0, 6.2);
  for (int k = 0; k < 1000; ++k) {
    const Coordinate a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)}, c{lat(rng), lon(rng)};
    EXPECT_EQ(dlcss::distance(a, b), dlcss::distance(b, a));
    EXPECT_GT(dlcss::distance(a, b), 0.0);
    const double ac = dlcss::distance(a, c);
    EXPECT_LE(ac, (dlcss::distance(a, b) + dlcss::distance(b, c)) * (1 + 1e-6));
  }
}

TEST(Geo, InvalidCoordinatesThrow) {
  EXPECT_THROW(dlcss::distance({91.0, 0.0}, {0.0, 0.0}), dlcss::DomainError);
  EXPECT_THROW(dlcss::distance({0.0, 0.0}, {0.0, 181.0}), dlcss::DomainError);
  EXPECT_THROW(dlcss::distance({NAN, 0.0}, {0.0, 0.0}), dlcss::DomainError);
  EXPECT_THROW(dlcss::distance({0.0, INFINITY}, {0.0, 0.0}), dlcss::DomainError);
}

TEST(Geo, RouteNeedsTwoValidPoints) {
  EXPECT_THROW(Route("r", {{50.0, 6.0}}), dlcss::DomainError);
  EXPECT_THROW(Route("r", {}), dlcss::DomainError);
  EXPECT_THROW(Route("r", {{50.0, 6.0}, {95.0, 6.0}}), dlcss::DomainError);
  EXPECT_NO_THROW(Route("r", {{50.0, 6.0}, {50.0, 6.0}}));
}

TEST(Geo, RouteLength) {
  EXPECT_EQ(dlcss::route_length(Route("r", {{50.0, 6.0}, {50.0, 6.0}})), 0.0);
  const Route r("r", {{50.775, 6.083}, {50.776, 6.083}, {50.777, 6.083}});
  const double step = 6371000.0 * 1e-3 * std::numbers::pi / 180.0;
  EXPECT_NEAR(dlcss::route_length(r), 2 * step, 1e-6);
  EXPECT_NEAR(dlcss::route_length(r), 222.39, 1e-2);
}

TEST(Geo, ArcLengthSpans) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(50.7, 50.8), lon(6.0, 6.2);
  std::vector<Coordinate> pts;
  for (int k = 0; k < 12; ++k) pts.push_back({lat(rng), lon(rng)});
  const Route r("r", pts);
  const std::size_t last = r.size() - 1;
  EXPECT_EQ(dlcss::arc_length_between(r, 4, 4), 0.0);
  EXPECT_EQ(dlcss::arc_length_between(r, 0, last), dlcss::route_length(r));
  for (std::size_t m = 0; m <= last; ++m) {
    EXPECT_NEAR(dlcss::arc_length_between(r, 0, m) + dlcss::arc_length_between(r, m, last),
                dlcss::route_length(r), 1e-6);
  }
}

TEST(Geo, ArcLengthRejectsBadSpans) {
  const Route r("r", {{50.0, 6.0}, {50.1, 6.0}, {50.2, 6.0}});
  EXPECT_THROW(dlcss::arc_length_between(r, 2, 1), dlcss::DomainError);
  EXPECT_THROW(dlcss::arc_length_between(r, 0, 3), dlcss::DomainError);
}

}  // namespace
