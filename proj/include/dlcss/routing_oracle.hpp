#pragma once

// Ground-truth side of the evaluation: a seeded lattice road network,
// Dijkstra routing on it, and the exact detour of a shared ride.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dlcss/geo.hpp"

namespace dlcss {

using NodeId = std::size_t;

struct GridParams {
  std::size_t rows = 20;
  std::size_t cols = 20;
  Coordinate origin{50.75, 6.05};  // south-west corner
  double spacing_m = 250.0;
  double removal_fraction = 0.10;
  std::uint64_t seed = 1;

  friend bool operator==(const GridParams&, const GridParams&) = default;
};

struct Edge {
  NodeId u = 0;  // u < v
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// 4-neighbour lattice with edge weights equal to the haversine distance
/// between node coordinates. Immutable after construction; always connected.
class GridGraph {
 public:
  struct Arc {
    NodeId to;
    double weight_m;
  };

  /// Full lattice minus a seeded random subset of edges. An edge is only
  /// removed if the graph stays connected, so fewer edges than requested may
  /// be removed on very sparse settings.
  static GridGraph generate(const GridParams& p) {
    check_params(p);
    std::vector<Edge> all = lattice_edges(p.rows, p.cols);
    const auto target = static_cast<std::size_t>(
        std::llround(p.removal_fraction * static_cast<double>(all.size())));

    std::vector<Edge> order = all;
    std::mt19937_64 rng(p.seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Edge> removed;
    for (const Edge& e : order) {
      if (removed.size() >= target) break;
      removed.push_back(e);
      std::sort(removed.begin(), removed.end());
      if (!connected(p.rows * p.cols, difference(all, removed))) {
        removed.erase(std::find(removed.begin(), removed.end(), e));
      }
    }
    return GridGraph(p, difference(all, removed));
  }

  GridGraph(const GridParams& p, std::vector<Edge> edges) : params_(p) {
    check_params(p);
    const double lat_step = p.spacing_m / kEarthRadiusM * 180.0 / std::numbers::pi;
    lat_step_deg_ = lat_step;
    lon_step_deg_ = lat_step / std::cos(p.origin.lat * std::numbers::pi / 180.0);
    coords_.reserve(p.rows * p.cols);
    for (std::size_t r = 0; r < p.rows; ++r) {
      for (std::size_t c = 0; c < p.cols; ++c) {
        Coordinate pt{p.origin.lat + static_cast<double>(r) * lat_step_deg_,
                      p.origin.lon + static_cast<double>(c) * lon_step_deg_};
        validate(pt);
        coords_.push_back(pt);
      }
    }
    for (auto& e : edges) {
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.v >= coords_.size()) throw DomainError("edge references unknown node");
      const bool horizontal = e.v == e.u + 1 && e.v % p.cols != 0;
      const bool vertical = e.v == e.u + p.cols;
      if (!horizontal && !vertical) {
        throw DomainError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                          ") is not a lattice edge");
      }
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      throw DomainError("duplicate edge in graph");
    }
    if (!connected(coords_.size(), edges)) throw DomainError("graph is not connected");
    edges_ = std::move(edges);
    adjacency_.assign(coords_.size(), {});
    for (const auto& e : edges_) {
      const double w = distance(coords_[e.u], coords_[e.v]);
      adjacency_[e.u].push_back({e.v, w});
      adjacency_[e.v].push_back({e.u, w});
    }
    for (auto& arcs : adjacency_) {
      std::sort(arcs.begin(), arcs.end(),
                [](const Arc& x, const Arc& y) { return x.to < y.to; });
    }
  }

  const GridParams& params() const noexcept { return params_; }
  std::size_t node_count() const noexcept { return coords_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Arc>& arcs(NodeId n) const { return adjacency_.at(n); }
  const Coordinate& coordinate(NodeId n) const { return coords_.at(n); }
  NodeId node(std::size_t row, std::size_t col) const {
    if (row >= params_.rows || col >= params_.cols) throw DomainError("grid cell out of range");
    return row * params_.cols + col;
  }

  bool in_bounds(const Coordinate& c) const noexcept {
    const double half_lat = lat_step_deg_ / 2.0;
    const double half_lon = lon_step_deg_ / 2.0;
    const Coordinate& lo = coords_.front();
    const Coordinate& hi = coords_.back();
    return c.lat >= lo.lat - half_lat && c.lat <= hi.lat + half_lat &&
           c.lon >= lo.lon - half_lon && c.lon <= hi.lon + half_lon;
  }

  /// Nearest node by haversine distance; ties go to the smaller node id.
  NodeId snap(const Coordinate& c) const {
    validate(c);
    if (!in_bounds(c)) {
      throw DomainError("coordinate (" + std::to_string(c.lat) + ", " +
                        std::to_string(c.lon) + ") outside the grid bounding box");
    }
    const auto clamp_index = [](double x, std::size_t n) {
      const double r = std::round(x);
      return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(n - 1)));
    };
    const std::size_t r0 =
        clamp_index((c.lat - params_.origin.lat) / lat_step_deg_, params_.rows);
    const std::size_t c0 =
        clamp_index((c.lon - params_.origin.lon) / lon_step_deg_, params_.cols);
    NodeId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t r = r0 > 0 ? r0 - 1 : 0; r <= std::min(r0 + 1, params_.rows - 1); ++r) {
      for (std::size_t col = c0 > 0 ? c0 - 1 : 0; col <= std::min(c0 + 1, params_.cols - 1);
           ++col) {
        const NodeId n = node(r, col);
        const double d = distance(coords_[n], c);
        if (d < best_d) {
          best_d = d;
          best = n;
        }
      }
    }
    return best;
  }

  friend bool operator==(const GridGraph& a, const GridGraph& b) {
    return a.params_ == b.params_ && a.edges_ == b.edges_;
  }

 private:
  static void check_params(const GridParams& p) {
    if (p.rows < 1 || p.cols < 1 || p.rows * p.cols < 2) {
      throw DomainError("grid needs at least 2 nodes");
    }
    if (!(p.spacing_m > 0.0)) throw DomainError("grid spacing must be > 0");
    if (!(p.removal_fraction >= 0.0 && p.removal_fraction < 1.0)) {
      throw DomainError("removal fraction must be in [0, 1)");
    }
    validate(p.origin);
  }

  static std::vector<Edge> lattice_edges(std::size_t rows, std::size_t cols) {
    std::vector<Edge> out;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const NodeId n = r * cols + c;
        if (c + 1 < cols) out.push_back({n, n + 1});
        if (r + 1 < rows) out.push_back({n, n + cols});
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  static std::vector<Edge> difference(const std::vector<Edge>& all,
                                      const std::vector<Edge>& removed) {
    std::vector<Edge> out;
    std::set_difference(all.begin(), all.end(), removed.begin(), removed.end(),
                        std::back_inserter(out));
    return out;
  }

  static bool connected(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& e : edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  }

  GridParams params_;
  double lat_step_deg_ = 0.0;
  double lon_step_deg_ = 0.0;
  std::vector<Coordinate> coords_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
};

inline nlohmann::json to_json(const GridGraph& g) {
  const auto& p = g.params();
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId n = 0; n < g.node_count(); ++n) {
    nodes.push_back({g.coordinate(n).lat, g.coordinate(n).lon});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"type", "GridGraph"},
          {"rows", p.rows},
          {"cols", p.cols},
          {"origin", {{"lat", p.origin.lat}, {"lon", p.origin.lon}}},
          {"spacing_m", p.spacing_m},
          {"removal_fraction", p.removal_fraction},
          {"seed", p.seed},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

/// Node coordinates in the document are informational; they are recomputed
/// from the parameters.
inline GridGraph grid_graph_from_json(const nlohmann::json& j) {
  try {
    GridParams p;
    p.rows = j.at("rows").get<std::size_t>();
    p.cols = j.at("cols").get<std::size_t>();
    p.origin = {j.at("origin").at("lat").get<double>(), j.at("origin").at("lon").get<double>()};
    p.spacing_m = j.at("spacing_m").get<double>();
    p.removal_fraction = j.at("removal_fraction").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>()});
    }
    return GridGraph(p, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed graph document: ") + e.what(), 0);
  }
}

struct ShortestPathTree {
  NodeId source = 0;
  std::vector<double> dist_m;
  std::vector<NodeId> pred;  // pred[source] == source; unreachable: node_count()
};

/// Dijkstra from `source`. Among equal-length paths the predecessor with the
/// smaller node id is kept, which makes paths deterministic.
inline ShortestPathTree dijkstra(const GridGraph& g, NodeId source) {
  const std::size_t n = g.node_count();
  if (source >= n) throw DomainError("source node out of range");
  ShortestPathTree t{source, std::vector<double>(n, std::numeric_limits<double>::infinity()),
                     std::vector<NodeId>(n, n)};
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  t.dist_m[source] = 0.0;
  t.pred[source] = source;
  queue.push({0.0, source});
  std::vector<char> done(n, 0);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const auto& arc : g.arcs(u)) {
      if (done[arc.to]) continue;
      const double nd = d + arc.weight_m;
      if (nd < t.dist_m[arc.to] || (nd == t.dist_m[arc.to] && u < t.pred[arc.to])) {
        t.dist_m[arc.to] = nd;
        t.pred[arc.to] = u;
        queue.push({nd, arc.to});
      }
    }
  }
  return t;
}

inline std::vector<NodeId> path_to(const ShortestPathTree& t, NodeId target) {
  const std::size_t n = t.pred.size();
  if (target >= n || t.pred[target] == n) return {};
  std::vector<NodeId> path{target};
  while (path.back() != t.source) path.push_back(t.pred[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

/// Shortest road route between the nodes nearest to `origin` and
/// `destination`. Throws NoRouteError if both snap to the same node.
inline Route shortest_route(const GridGraph& g, const Coordinate& origin,
                            const Coordinate& destination, std::string id = {}) {
  const NodeId s = g.snap(origin);
  const NodeId d = g.snap(destination);
  if (s == d) throw NoRouteError("origin and destination snap to the same node");
  const auto nodes = path_to(dijkstra(g, s), d);
  if (nodes.empty()) throw NoRouteError("destination unreachable");
  std::vector<Coordinate> pts;
  pts.reserve(nodes.size());
  for (NodeId n : nodes) pts.push_back(g.coordinate(n));
  return Route(std::move(id), std::move(pts));
}

/// Ground-truth verdict for carrying request R on vehicle route A.
struct OracleAssessment {
  double detour_m = 0.0;
  double detour_fraction = 0.0;  // detour_m / l_A
  bool compatible = false;
  std::string diagnostic;  // set when a leg is unroutable
};

/// Maximum accepted detour as a fraction of the vehicle's own route length.
inline constexpr double kMaxDetourFraction = 0.5;

/// Leg lengths come from `leg(u, v)`, which returns the shortest-path length
/// between two nodes or nullopt if unreachable. Stop order is
/// A.start -> R.start -> R.end -> A.end.
template <typename LegFn>
OracleAssessment assess_shared_ride(const GridGraph& g, const Route& a, const Route& r,
                                    LegFn&& leg) {
  OracleAssessment out;
  const NodeId stops[4] = {g.snap(a.front()), g.snap(r.front()), g.snap(r.back()),
                           g.snap(a.back())};
  double shared = 0.0;
  for (int k = 0; k < 3; ++k) {
    const std::optional<double> len = leg(stops[k], stops[k + 1]);
    if (!len) {
      out.detour_m = std::numeric_limits<double>::infinity();
      out.detour_fraction = std::numeric_limits<double>::infinity();
      out.diagnostic = "leg " + std::to_string(k) + " (" + std::to_string(stops[k]) +
                       " -> " + std::to_string(stops[k + 1]) + ") unroutable";
      return out;
    }
    shared += *len;
  }
  const double l_a = route_length(a);
  out.detour_m = std::max(0.0, shared - l_a);
  if (l_a > 0.0) {
    out.detour_fraction = out.detour_m / l_a;
  } else {
    out.detour_fraction = out.detour_m > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  out.compatible = out.detour_fraction <= kMaxDetourFraction;
  return out;
}

inline OracleAssessment assess_shared_ride(const GridGraph& g, const Route& a, const Route& r) {
  return assess_shared_ride(g, a, r, [&g](NodeId u, NodeId v) -> std::optional<double> {
    const auto t = dijkstra(g, u);
    if (!std::isfinite(t.dist_m[v])) return std::nullopt;
    return t.dist_m[v];
  });
}

}  // namespace dlcss
