#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlcss/errors.hpp"

namespace dlcss {

/// Mean Earth radius used by every distance in the library.
inline constexpr double kEarthRadiusM = 6371000.0;

/// A point in decimal degrees. Longitudes are expected pre-normalized to
/// [-180, 180]; there is no antimeridian handling.
struct Coordinate {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

inline bool is_valid(const Coordinate& c) noexcept {
  return std::isfinite(c.lat) && std::isfinite(c.lon) && c.lat >= -90.0 &&
         c.lat <= 90.0 && c.lon >= -180.0 && c.lon <= 180.0;
}

inline void validate(const Coordinate& c) {
  if (!is_valid(c)) {
    throw DomainError("invalid coordinate (" + std::to_string(c.lat) + ", " +
                      std::to_string(c.lon) + ")");
  }
}

/// Haversine great-circle distance in meters.
inline double distance(const Coordinate& a, const Coordinate& b) {
  validate(a);
  validate(b);
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  const double h =
      s_lat * s_lat + std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * s_lon * s_lon;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

/// Functor form of `distance`, the default metric of the DLCSS pipeline.
struct HaversineDistance {
  double operator()(const Coordinate& a, const Coordinate& b) const {
    return distance(a, b);
  }
};

/// An ordered polyline with an identifier. Point order is travel order.
class Route {
 public:
  Route() = default;

  Route(std::string id, std::vector<Coordinate> points)
      : id_(std::move(id)), points_(std::move(points)) {
    if (points_.size() < 2) {
      throw DomainError("route '" + id_ + "' needs at least 2 points, got " +
                        std::to_string(points_.size()));
    }
    for (const auto& p : points_) validate(p);
  }

  const std::string& id() const noexcept { return id_; }
  std::span<const Coordinate> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Coordinate& operator[](std::size_t i) const { return points_[i]; }
  const Coordinate& front() const { return points_.front(); }
  const Coordinate& back() const { return points_.back(); }

  friend bool operator==(const Route&, const Route&) = default;

 private:
  std::string id_;
  std::vector<Coordinate> points_;
};

namespace detail {

inline double polyline_length(std::span<const Coordinate> pts, std::size_t i,
                              std::size_t j) {
  double total = 0.0;
  for (std::size_t k = i; k < j; ++k) total += distance(pts[k], pts[k + 1]);
  return total;
}

}  // namespace detail

/// Polyline length from point `i` to point `j` (inclusive indices, i <= j).
inline double arc_length_between(const Route& r, std::size_t i, std::size_t j) {
  if (i > j || j >= r.size()) {
    throw DomainError("arc span [" + std::to_string(i) + ", " + std::to_string(j) +
                      "] invalid for route '" + r.id() + "' with " +
                      std::to_string(r.size()) + " points");
  }
  return detail::polyline_length(r.points(), i, j);
}

inline double route_length(const Route& r) {
  if (r.size() < 2) throw DomainError("route '" + r.id() + "' has fewer than 2 points");
  return detail::polyline_length(r.points(), 0, r.size() - 1);
}

}  // namespace dlcss
