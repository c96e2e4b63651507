#pragma once

// Filter-versus-oracle evaluation: score every ordered pair of a pool with
// DLCSS, label it with the routing oracle, and summarize how many pairs the
// score threshold discards and whether any compatible pair is lost.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dlcss/core.hpp"
#include "dlcss/dataset_io.hpp"
#include "dlcss/parallel.hpp"
#include "dlcss/routing_oracle.hpp"

namespace dlcss {

struct PairRecord {
  std::string a_id;
  std::string r_id;
  Similarity sm = Similarity::no_overlap();
  OracleAssessment oracle;
};

struct StageTimings {
  double scoring_ms = 0.0;
  double oracle_ms = 0.0;
  double total_ms = 0.0;

  friend bool operator==(const StageTimings&, const StageTimings&) = default;
};

struct EvalReport {
  std::size_t n_pairs = 0;
  double threshold_m = 0.0;
  double rejection_rate = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t true_negatives = 0;
  std::size_t false_negatives = 0;
  std::optional<double> tp_rate_among_accepted;  // TP / (TP + FP)
  double tp_rate_overall = 0.0;                  // TP / n_pairs
  std::optional<StageTimings> runtime_ms;
  std::vector<PairRecord> pairs;  // not part of the JSON/CSV summary
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

// Shortest-path trees for every route endpoint, computed once per pool.
class EndpointDistances {
 public:
  EndpointDistances(const GridGraph& g, const std::vector<Route>& routes, unsigned jobs) {
    std::vector<NodeId> sources;
    for (const auto& r : routes) {
      sources.push_back(g.snap(r.front()));
      sources.push_back(g.snap(r.back()));
    }
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    std::vector<ShortestPathTree> trees(sources.size());
    parallel_for(sources.size(), jobs, [&](std::size_t k) { trees[k] = dijkstra(g, sources[k]); });
    for (std::size_t k = 0; k < sources.size(); ++k) {
      trees_.emplace(sources[k], std::move(trees[k]));
    }
  }

  std::optional<double> operator()(NodeId u, NodeId v) const {
    const double d = trees_.at(u).dist_m.at(v);
    if (!std::isfinite(d)) return std::nullopt;
    return d;
  }

 private:
  std::map<NodeId, ShortestPathTree> trees_;
};

}  // namespace detail

/// Scores and labels every ordered pair (a, r) with a != r, in pool order.
inline std::vector<PairRecord> label_pairs(const std::vector<Route>& routes, const GridGraph& g,
                                           unsigned jobs = 1,
                                           StageTimings* timings = nullptr) {
  const std::size_t n = routes.size();
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t r = 0; r < n; ++r) {
      if (a != r) index.emplace_back(a, r);
    }
  }
  std::vector<PairRecord> out(index.size());

  auto t0 = std::chrono::steady_clock::now();
  detail::parallel_for(index.size(), jobs, [&](std::size_t k) {
    const auto [a, r] = index[k];
    out[k].a_id = routes[a].id();
    out[k].r_id = routes[r].id();
    out[k].sm = compute_dlcss(routes[a], routes[r]).sm;
  });
  const double scoring = detail::elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  const detail::EndpointDistances legs(g, routes, jobs);
  detail::parallel_for(index.size(), jobs, [&](std::size_t k) {
    const auto [a, r] = index[k];
    out[k].oracle = assess_shared_ride(g, routes[a], routes[r], legs);
  });
  if (timings) {
    timings->scoring_ms = scoring;
    timings->oracle_ms = detail::elapsed_ms(t0);
  }
  return out;
}

/// Smallest threshold with zero false negatives on `pairs`: the largest
/// finite score among oracle-compatible pairs. Falls back to `fallback_m`
/// when no pair is compatible.
inline double calibrate_threshold(const std::vector<PairRecord>& pairs,
                                  double fallback_m = kDefaultThresholdM) {
  std::optional<double> best;
  for (const auto& p : pairs) {
    if (p.oracle.compatible && p.sm.is_finite()) {
      best = std::max(best.value_or(p.sm.value()), p.sm.value());
    }
  }
  return best.value_or(fallback_m);
}

inline double calibrate_threshold(const RoutePool& pool, const GridGraph& g,
                                  double fallback_m = kDefaultThresholdM, unsigned jobs = 1) {
  if (pool.routes.size() < 2) throw DomainError("calibration needs at least 2 routes");
  return calibrate_threshold(label_pairs(pool.routes, g, jobs), fallback_m);
}

inline EvalReport summarize_pairs(std::vector<PairRecord> pairs, double threshold_m) {
  if (!(threshold_m >= 0.0)) throw DomainError("threshold must be >= 0");
  EvalReport rep;
  rep.n_pairs = pairs.size();
  rep.threshold_m = threshold_m;
  for (const auto& p : pairs) {
    const bool accepted = p.sm.within(threshold_m);
    if (accepted && p.oracle.compatible) ++rep.true_positives;
    if (accepted && !p.oracle.compatible) ++rep.false_positives;
    if (!accepted && !p.oracle.compatible) ++rep.true_negatives;
    if (!accepted && p.oracle.compatible) ++rep.false_negatives;
  }
  if (rep.n_pairs > 0) {
    const auto n = static_cast<double>(rep.n_pairs);
    rep.rejection_rate = static_cast<double>(rep.true_negatives + rep.false_negatives) / n;
    rep.tp_rate_overall = static_cast<double>(rep.true_positives) / n;
  }
  const std::size_t accepted = rep.true_positives + rep.false_positives;
  if (accepted > 0) {
    rep.tp_rate_among_accepted =
        static_cast<double>(rep.true_positives) / static_cast<double>(accepted);
  }
  rep.pairs = std::move(pairs);
  return rep;
}

inline EvalReport run_eval(const RoutePool& pool, const GridGraph& g, double threshold_m,
                           unsigned jobs = 1) {
  if (!(threshold_m >= 0.0)) throw DomainError("threshold must be >= 0");
  const auto t0 = std::chrono::steady_clock::now();
  StageTimings timings;
  auto rep = summarize_pairs(label_pairs(pool.routes, g, jobs, &timings), threshold_m);
  timings.total_ms = detail::elapsed_ms(t0);
  rep.runtime_ms = timings;
  return rep;
}

/// Calibrates on the pairs among the first half of the pool and evaluates on
/// the pairs among the second half.
struct HoldoutResult {
  double calibrated_threshold_m = 0.0;
  EvalReport report;
};

inline HoldoutResult run_holdout_eval(const RoutePool& pool, const GridGraph& g,
                                      double fallback_m = kDefaultThresholdM,
                                      unsigned jobs = 1) {
  if (pool.routes.size() < 4) throw DomainError("holdout evaluation needs at least 4 routes");
  const auto mid = pool.routes.begin() + static_cast<std::ptrdiff_t>(pool.routes.size() / 2);
  const std::vector<Route> fit(pool.routes.begin(), mid);
  const RoutePool test{std::vector<Route>(mid, pool.routes.end()), pool.metadata};
  const double threshold = calibrate_threshold(label_pairs(fit, g, jobs), fallback_m);
  return {threshold, run_eval(test, g, threshold, jobs)};
}

// ---------------------------------------------------------------------------
// Report serialization

enum class ReportFormat { kJson, kCsv, kPlotData };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "plot-data") return ReportFormat::kPlotData;
  throw DomainError("unknown report format '" + std::string(s) + "' (json|csv|plot-data)");
}

namespace detail {

// Shortest round-trip decimal form.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline nlohmann::json to_json(const EvalReport& r, bool include_timings = false) {
  nlohmann::json j = {{"n_pairs", r.n_pairs},
                      {"threshold_m", r.threshold_m},
                      {"rejection_rate", r.rejection_rate},
                      {"true_positives", r.true_positives},
                      {"false_positives", r.false_positives},
                      {"true_negatives", r.true_negatives},
                      {"false_negatives", r.false_negatives},
                      {"tp_rate_among_accepted", nullptr},
                      {"tp_rate_overall", r.tp_rate_overall}};
  if (r.tp_rate_among_accepted) j["tp_rate_among_accepted"] = *r.tp_rate_among_accepted;
  if (include_timings && r.runtime_ms) {
    j["runtime_ms"] = {{"scoring", r.runtime_ms->scoring_ms},
                       {"oracle", r.runtime_ms->oracle_ms},
                       {"total", r.runtime_ms->total_ms}};
  }
  return j;
}

inline EvalReport report_from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.n_pairs = j.at("n_pairs").get<std::size_t>();
    r.threshold_m = j.at("threshold_m").get<double>();
    r.rejection_rate = j.at("rejection_rate").get<double>();
    r.true_positives = j.at("true_positives").get<std::size_t>();
    r.false_positives = j.at("false_positives").get<std::size_t>();
    r.true_negatives = j.at("true_negatives").get<std::size_t>();
    r.false_negatives = j.at("false_negatives").get<std::size_t>();
    if (!j.at("tp_rate_among_accepted").is_null()) {
      r.tp_rate_among_accepted = j["tp_rate_among_accepted"].get<double>();
    }
    r.tp_rate_overall = j.at("tp_rate_overall").get<double>();
    if (j.contains("runtime_ms")) {
      const auto& t = j["runtime_ms"];
      r.runtime_ms = StageTimings{t.at("scoring").get<double>(), t.at("oracle").get<double>(),
                                  t.at("total").get<double>()};
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), 0);
  }
}

inline std::string render_report(const EvalReport& r, ReportFormat format,
                                 bool include_timings = false) {
  using detail::format_number;
  switch (format) {
    case ReportFormat::kJson:
      return to_json(r, include_timings).dump(2) + "\n";
    case ReportFormat::kCsv: {
      std::string out =
          "n_pairs,threshold_m,rejection_rate,true_positives,false_positives,"
          "true_negatives,false_negatives,tp_rate_among_accepted,tp_rate_overall\n";
      out += std::to_string(r.n_pairs) + "," + format_number(r.threshold_m) + "," +
             format_number(r.rejection_rate) + "," + std::to_string(r.true_positives) + "," +
             std::to_string(r.false_positives) + "," + std::to_string(r.true_negatives) + "," +
             std::to_string(r.false_negatives) + "," +
             (r.tp_rate_among_accepted ? format_number(*r.tp_rate_among_accepted) : "") + "," +
             format_number(r.tp_rate_overall) + "\n";
      return out;
    }
    case ReportFormat::kPlotData: {
      std::string out = "a_id,r_id,sm,detour_fraction,compatible,accepted\n";
      for (const auto& p : r.pairs) {
        out += p.a_id + "," + p.r_id + "," + format_number(p.sm.value()) + "," +
               format_number(p.oracle.detour_fraction) + "," +
               (p.oracle.compatible ? "1" : "0") + "," +
               (p.sm.within(r.threshold_m) ? "1" : "0") + "\n";
      }
      return out;
    }
  }
  throw DomainError("unhandled report format");
}

inline void emit_report(const EvalReport& r, ReportFormat format,
                        const std::filesystem::path& path, bool include_timings = false) {
  write_text(path, render_report(r, format, include_timings));
}

}  // namespace dlcss
