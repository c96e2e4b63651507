// Scores a request that shares the middle of a vehicle's route.
#include <cstdio>

#include "dlcss.hpp"

int main() {
  using dlcss::Coordinate;
  std::vector<Coordinate> vehicle_pts, request_pts;
  for (int k = 0; k <= 10; ++k) vehicle_pts.push_back({50.775, 6.05 + 0.003 * k});
  // Joins at the 4th vehicle point from 300 m north, rides along, leaves at the 8th.
  request_pts.push_back({50.7777, 6.05 + 0.003 * 3});
  for (int k = 3; k <= 7; ++k) request_pts.push_back({50.775, 6.05 + 0.003 * k});

  const dlcss::Route vehicle("vehicle", vehicle_pts);
  const dlcss::Route request("request", request_pts);
  const auto res = dlcss::compute_dlcss(vehicle, request);

  std::printf("segments (distance_m, a_index, r_index):\n");
  for (const auto& s : res.segments) {
    std::printf("  %10.3f %3zu %3zu\n", s.distance_m, s.a_index, s.r_index);
  }
  std::printf("sum = %.3f m, l_sub_a = %.3f m, l_a = %.3f m, sm = %s\n", res.sum_segments_m,
              res.l_sub_a_m, res.l_a_m, res.sm.to_string().c_str());
  std::printf("accepted at %.0f m: %s\n", dlcss::kDefaultThresholdM,
              res.sm.within(dlcss::kDefaultThresholdM) ? "yes" : "no");
}
