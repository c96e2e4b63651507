// dlcss: generate synthetic route pools, score route pairs, search meeting
// points, sweep the similarity metric and run the filter-vs-oracle evaluation.
//
// Exit codes: 0 success, 1 domain/validation error, 2 I/O error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlcss.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

struct GridOptions {
  dlcss::GridParams params;
  std::uint64_t seed = 1;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--seed", seed, "Seed for graph edge removal and route sampling")
        ->capture_default_str();
    cmd.add_option("--rows", params.rows, "Grid rows")->capture_default_str();
    cmd.add_option("--cols", params.cols, "Grid columns")->capture_default_str();
    cmd.add_option("--spacing", params.spacing_m, "Node spacing in meters")
        ->capture_default_str();
    cmd.add_option("--removal", params.removal_fraction,
                   "Fraction of lattice edges removed (connectivity preserved)")
        ->capture_default_str();
    cmd.add_option("--origin-lat", params.origin.lat, "South-west corner latitude")
        ->capture_default_str();
    cmd.add_option("--origin-lon", params.origin.lon, "South-west corner longitude")
        ->capture_default_str();
  }

  dlcss::GridGraph build() const {
    auto p = params;
    p.seed = seed;
    return dlcss::GridGraph::generate(p);
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    dlcss::write_text(path, text);
  }
}

nlohmann::json sm_json(const dlcss::Similarity& sm) {
  return sm.is_finite() ? nlohmann::json(sm.value()) : nlohmann::json(nullptr);
}

nlohmann::json route_coordinates(const dlcss::Route& r) {
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& p : r.points()) {
    coords.push_back({dlcss::round_coordinate(p.lon), dlcss::round_coordinate(p.lat)});
  }
  return coords;
}

const dlcss::Route& find_route(const dlcss::RoutePool& pool, const std::string& id) {
  for (const auto& r : pool.routes) {
    if (r.id() == id) return r;
  }
  throw dlcss::DomainError("route id '" + id + "' not found in pool");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw dlcss::DomainError(std::string(name) + " must be > 0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DLCSS route similarity matching and evaluation"};
  app.require_subcommand(1);

  // gen ---------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a synthetic route pool and its road graph");
  GridOptions gen_grid;
  gen_grid.add_to(*gen);
  std::size_t gen_n = 180;
  double gen_min_length = dlcss::kDefaultMinRouteLengthM;
  std::string gen_out = "pool.geojson";
  std::string gen_graph_out = "graph.json";
  gen->add_option("--n", gen_n, "Number of routes")->capture_default_str();
  gen->add_option("--min-length", gen_min_length, "Minimum route length in meters")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "Output GeoJSON pool")->capture_default_str();
  gen->add_option("--graph-out", gen_graph_out, "Output graph JSON")->capture_default_str();

  // match -------------------------------------------------------------------
  auto* match = app.add_subcommand("match", "Score vehicle x request pairs against a threshold");
  std::string match_vehicles, match_requests, match_out;
  double match_threshold = dlcss::kDefaultThresholdM;
  unsigned match_jobs = 1;
  match->add_option("--vehicles", match_vehicles, "GeoJSON pool of vehicle routes")->required();
  match->add_option("--requests", match_requests,
                    "GeoJSON pool of request routes (default: the vehicle pool)");
  match->add_option("--threshold", match_threshold, "Acceptance threshold in meters")
      ->capture_default_str();
  match->add_option("--out", match_out, "JSON-lines output (default: stdout)");
  match->add_option("--jobs", match_jobs, "Worker threads")->capture_default_str();

  // eval --------------------------------------------------------------------
  auto* eval = app.add_subcommand(
      "eval", "Score all ordered pairs, label them with the routing oracle, report");
  GridOptions eval_grid;
  eval_grid.add_to(*eval);
  std::string eval_pool, eval_graph, eval_out, eval_plot_out, eval_format = "json";
  std::size_t eval_n = 100;
  double eval_min_length = dlcss::kDefaultMinRouteLengthM;
  double eval_threshold = dlcss::kDefaultThresholdM;
  bool eval_calibrate = false, eval_holdout = false, eval_timings = false;
  unsigned eval_jobs = 1;
  eval->add_option("--pool", eval_pool, "GeoJSON pool (default: generate one)");
  eval->add_option("--graph", eval_graph, "Graph JSON (default: generate one)");
  eval->add_option("--n", eval_n, "Pool size when generating")->capture_default_str();
  eval->add_option("--min-length", eval_min_length, "Minimum route length when generating")
      ->capture_default_str();
  eval->add_option("--threshold", eval_threshold, "Threshold in meters if not calibrating")
      ->capture_default_str();
  eval->add_flag("--calibrate", eval_calibrate,
                 "Threshold = largest finite score among oracle-compatible pairs");
  eval->add_flag("--holdout", eval_holdout,
                 "Calibrate on the first half of the pool, evaluate on the second");
  eval->add_option("--format", eval_format, "json | csv | plot-data")->capture_default_str();
  eval->add_option("--out", eval_out, "Report output (default: stdout)");
  eval->add_option("--plot-out", eval_plot_out, "Also write plot-data rows here");
  eval->add_flag("--timings", eval_timings, "Include per-stage timings in the JSON report");
  eval->add_option("--jobs", eval_jobs, "Worker threads")->capture_default_str();

  // sweep -------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "Tabulate the similarity score over a grid");
  std::vector<double> sweep_fractions, sweep_sums;
  for (int k = 1; k <= 20; ++k) sweep_fractions.push_back(k / 20.0);
  for (int k = 0; k < 20; ++k) sweep_sums.push_back(2000.0 * k);
  std::string sweep_out;
  sweep->add_option("--fractions", sweep_fractions, "Overlap fractions in (0, 1]")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--sums", sweep_sums, "Segment sums in meters")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "CSV output (default: stdout)");

  // meeting -----------------------------------------------------------------
  auto* meeting = app.add_subcommand("meeting", "Search meeting points for one pair");
  GridOptions meeting_grid;
  meeting_grid.add_to(*meeting);
  std::string meeting_pool, meeting_graph, meeting_points, meeting_vehicle, meeting_request,
      meeting_out;
  double meeting_threshold = dlcss::kDefaultThresholdM;
  unsigned meeting_jobs = 1;
  meeting->add_option("--pool", meeting_pool, "GeoJSON pool holding both routes")->required();
  meeting->add_option("--vehicle", meeting_vehicle, "Vehicle route id")->required();
  meeting->add_option("--request", meeting_request, "Request route id")->required();
  meeting->add_option("--meeting-points", meeting_points, "CSV: id,lat,lon,label")->required();
  meeting->add_option("--graph", meeting_graph,
                      "Graph JSON used to route from meeting points (default: generate one)");
  meeting->add_option("--threshold", meeting_threshold, "Threshold in meters")
      ->capture_default_str();
  meeting->add_option("--out", meeting_out, "JSON output (default: stdout)");
  meeting->add_option("--jobs", meeting_jobs, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    if (*gen) {
      if (gen_n < 1) throw dlcss::DomainError("--n must be >= 1");
      const auto g = gen_grid.build();
      const auto pool =
          dlcss::generate_pool(g, gen_n, dlcss::pool_seed(gen_grid.seed), gen_min_length);
      dlcss::write_geojson(pool, gen_out);
      dlcss::write_text(gen_graph_out, dlcss::to_json(g).dump() + "\n");
      std::cerr << "wrote " << pool.routes.size() << " routes to " << gen_out << "\n";
    } else if (*match) {
      if (!(match_threshold >= 0.0)) throw dlcss::DomainError("--threshold must be >= 0");
      const auto vehicles = dlcss::read_geojson(match_vehicles);
      const auto requests =
          match_requests.empty() ? vehicles : dlcss::read_geojson(match_requests);
      const auto decisions =
          dlcss::filter_pool(vehicles.routes, requests.routes, match_threshold, match_jobs);
      std::string text;
      for (const auto& d : decisions) {
        text += nlohmann::json{{"a_id", d.a_id},
                               {"r_id", d.r_id},
                               {"sm", sm_json(d.sm)},
                               {"no_overlap", d.sm.is_no_overlap()},
                               {"threshold_m", d.threshold_m},
                               {"accepted", d.accepted}}
                    .dump() +
                "\n";
      }
      write_output(match_out, text);
    } else if (*eval) {
      const auto format = dlcss::parse_report_format(eval_format);
      if (eval_pool.empty() != eval_graph.empty()) {
        throw dlcss::DomainError("--pool and --graph must be given together");
      }
      std::optional<dlcss::GridGraph> g;
      dlcss::RoutePool pool;
      if (eval_pool.empty()) {
        if (eval_n < 2) throw dlcss::DomainError("--n must be >= 2");
        g = eval_grid.build();
        pool = dlcss::generate_pool(*g, eval_n, dlcss::pool_seed(eval_grid.seed),
                                    eval_min_length);
      } else {
        g = dlcss::grid_graph_from_json(dlcss::read_json(eval_graph));
        pool = dlcss::read_geojson(eval_pool);
      }
      dlcss::EvalReport report;
      if (eval_holdout) {
        report = dlcss::run_holdout_eval(pool, *g, dlcss::kDefaultThresholdM, eval_jobs).report;
      } else {
        if (!(eval_threshold >= 0.0)) throw dlcss::DomainError("--threshold must be >= 0");
        if (eval_calibrate) {
          auto t0 = std::chrono::steady_clock::now();
          dlcss::StageTimings timings;
          auto pairs = dlcss::label_pairs(pool.routes, *g, eval_jobs, &timings);
          const double thr = dlcss::calibrate_threshold(pairs);
          report = dlcss::summarize_pairs(std::move(pairs), thr);
          timings.total_ms = dlcss::detail::elapsed_ms(t0);
          report.runtime_ms = timings;
        } else {
          report = dlcss::run_eval(pool, *g, eval_threshold, eval_jobs);
        }
      }
      write_output(eval_out, dlcss::render_report(report, format, eval_timings));
      if (!eval_plot_out.empty()) {
        dlcss::emit_report(report, dlcss::ReportFormat::kPlotData, eval_plot_out);
      }
    } else if (*sweep) {
      const auto table = dlcss::metric_sweep(sweep_fractions, sweep_sums);
      std::string text = "overlap_fraction,segment_sum_m,sm\n";
      for (std::size_t fi = 0; fi < table.fractions.size(); ++fi) {
        for (std::size_t si = 0; si < table.sums_m.size(); ++si) {
          text += dlcss::detail::format_number(table.fractions[fi]) + "," +
                  dlcss::detail::format_number(table.sums_m[si]) + "," +
                  dlcss::detail::format_number(table.at(fi, si)) + "\n";
        }
      }
      write_output(sweep_out, text);
    } else if (*meeting) {
      require_positive(meeting_threshold, "--threshold");
      const auto pool = dlcss::read_geojson(meeting_pool);
      const auto candidates = dlcss::load_meeting_points(meeting_points);
      const auto g = meeting_graph.empty()
                         ? meeting_grid.build()
                         : dlcss::grid_graph_from_json(dlcss::read_json(meeting_graph));
      const auto& vehicle = find_route(pool, meeting_vehicle);
      const auto& request = find_route(pool, meeting_request);
      const dlcss::RouteProvider router = [&g](const dlcss::Coordinate& o,
                                               const dlcss::Coordinate& d) {
        return dlcss::shortest_route(g, o, d);
      };
      const auto search = dlcss::evaluate_meeting_points(vehicle, request, candidates, router,
                                                         meeting_threshold, meeting_jobs);
      nlohmann::json out = {{"vehicle", vehicle.id()},
                            {"request", request.id()},
                            {"threshold_m", meeting_threshold},
                            {"direct_sm", sm_json(dlcss::score_pair(vehicle, request))},
                            {"match", nullptr}};
      if (search.best) {
        out["match"] = {{"meeting_point_id", search.best->meeting_point_id},
                        {"sm", sm_json(search.best->sm)},
                        {"rerouted_request",
                         {{"type", "LineString"},
                          {"coordinates", route_coordinates(search.best->rerouted_request)}}}};
      }
      nlohmann::json scores = nlohmann::json::array();
      for (const auto& s : search.scores) {
        scores.push_back({{"meeting_point_id", s.meeting_point_id}, {"sm", sm_json(s.sm)}});
      }
      nlohmann::json skipped = nlohmann::json::array();
      for (const auto& s : search.skipped) {
        skipped.push_back({{"meeting_point_id", s.meeting_point_id}, {"reason", s.reason}});
      }
      out["candidates"] = std::move(scores);
      out["skipped"] = std::move(skipped);
      write_output(meeting_out, out.dump(2) + "\n");
    }
  } catch (const dlcss::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}
