#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

#include "dlcss/core.hpp"
#include "dlcss/parallel.hpp"

namespace dlcss {

struct MatchDecision {
  std::string a_id;  // vehicle route
  std::string r_id;  // request route
  Similarity sm = Similarity::no_overlap();
  double threshold_m = kDefaultThresholdM;
  bool accepted = false;

  friend bool operator==(const MatchDecision&, const MatchDecision&) = default;
};

/// Directional score: `vehicle` plays route A, `request` route R.
inline Similarity score_pair(const Route& vehicle, const Route& request) {
  return compute_dlcss(vehicle, request).sm;
}

inline MatchDecision decide(const Route& vehicle, const Route& request, double threshold_m) {
  const Similarity sm = score_pair(vehicle, request);
  return {vehicle.id(), request.id(), sm, threshold_m, sm.within(threshold_m)};
}

/// One decision per (vehicle, request) pair, ordered by (a_id, r_id).
inline std::vector<MatchDecision> filter_pool(const std::vector<Route>& vehicle_routes,
                                              const std::vector<Route>& request_routes,
                                              double threshold_m = kDefaultThresholdM,
                                              unsigned jobs = 1) {
  if (!(threshold_m >= 0.0)) throw DomainError("threshold must be >= 0");
  const std::size_t nr = request_routes.size();
  std::vector<MatchDecision> out(vehicle_routes.size() * nr);
  detail::parallel_for(out.size(), jobs, [&](std::size_t k) {
    out[k] = decide(vehicle_routes[k / nr], request_routes[k % nr], threshold_m);
  });
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a_id, x.r_id) < std::tie(y.a_id, y.r_id);
  });
  return out;
}

/// The k vehicles with the smallest finite score for `request`, ascending,
/// ties broken by vehicle id.
inline std::vector<MatchDecision> rank_candidates(const Route& request,
                                                  const std::vector<Route>& vehicle_routes,
                                                  std::size_t k,
                                                  double threshold_m = kDefaultThresholdM) {
  if (k < 1) throw DomainError("k must be >= 1");
  std::vector<MatchDecision> scored;
  for (const auto& v : vehicle_routes) {
    auto d = decide(v, request, threshold_m);
    if (d.sm.is_finite()) scored.push_back(std::move(d));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.sm.value() != y.sm.value()) return x.sm.value() < y.sm.value();
    return x.a_id < y.a_id;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

}  // namespace dlcss
