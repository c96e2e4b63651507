#pragma once

// Pickup-side meeting points: when a request scores too high for a direct
// shared ride, try starting it from a candidate meeting point instead.

#include <charconv>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dlcss/core.hpp"
#include "dlcss/dataset_io.hpp"
#include "dlcss/parallel.hpp"

namespace dlcss {

struct MeetingPoint {
  std::string id;
  Coordinate location;
  std::string label;

  friend bool operator==(const MeetingPoint&, const MeetingPoint&) = default;
};

struct MeetingMatch {
  std::string meeting_point_id;
  Route rerouted_request;
  Similarity sm = Similarity::no_overlap();
};

struct CandidateScore {
  std::string meeting_point_id;
  Similarity sm = Similarity::no_overlap();
};

struct SkippedCandidate {
  std::string meeting_point_id;
  std::string reason;
};

struct MeetingSearch {
  std::optional<MeetingMatch> best;  // set only if its score is within the threshold
  std::vector<CandidateScore> scores;  // every successfully evaluated candidate, input order
  std::vector<SkippedCandidate> skipped;
};

using RouteProvider = std::function<Route(const Coordinate& origin, const Coordinate& destination)>;

/// Scores `vehicle` against the request rerouted to start at each candidate.
/// Returns the lowest-scoring candidate if it is within `threshold_m`; ties
/// go to the smallest candidate id. Provider failures skip the candidate.
/// `jobs` > 1 evaluates candidates concurrently and requires a thread-safe
/// provider.
inline MeetingSearch evaluate_meeting_points(const Route& vehicle, const Route& request,
                                             const std::vector<MeetingPoint>& candidates,
                                             const RouteProvider& route_provider,
                                             double threshold_m = kDefaultThresholdM,
                                             unsigned jobs = 1) {
  struct Slot {
    std::optional<MeetingMatch> match;
    std::string error;
  };
  std::vector<Slot> slots(candidates.size());
  detail::parallel_for(candidates.size(), jobs, [&](std::size_t k) {
    const MeetingPoint& m = candidates[k];
    try {
      Route provided = route_provider(m.location, request.back());
      // The rerouted request keeps the original destination exactly.
      std::vector<Coordinate> pts(provided.points().begin(), provided.points().end());
      pts.back() = request.back();
      Route rerouted(request.id() + "@" + m.id, std::move(pts));
      const Similarity sm = compute_dlcss(vehicle, rerouted).sm;
      slots[k].match = MeetingMatch{m.id, std::move(rerouted), sm};
    } catch (const std::exception& e) {
      slots[k].error = e.what();
    }
  });

  MeetingSearch out;
  const MeetingMatch* best = nullptr;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (!slots[k].match) {
      out.skipped.push_back({candidates[k].id, slots[k].error});
      continue;
    }
    const MeetingMatch& m = *slots[k].match;
    out.scores.push_back({m.meeting_point_id, m.sm});
    if (!best || m.sm < best->sm ||
        (m.sm == best->sm && m.meeting_point_id < best->meeting_point_id)) {
      best = &m;
    }
  }
  if (best && best->sm.within(threshold_m)) out.best = *best;
  return out;
}

namespace detail {

// Splits one CSV record; supports double-quoted fields with "" escapes.
inline std::optional<std::vector<std::string>> split_csv_record(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back() += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"' && fields.back().empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  if (quoted) return std::nullopt;
  return fields;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses a meeting-point table with header `id,lat,lon,label`. Errors carry
/// the 1-based line number of the offending row.
inline std::vector<MeetingPoint> parse_meeting_points(std::string_view text) {
  std::vector<MeetingPoint> out;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty()) continue;

    const auto fail = [line_no](const std::string& why) {
      return ParseError("meeting points row " + std::to_string(line_no) + ": " + why, line_no);
    };
    const auto fields = detail::split_csv_record(line);
    if (!fields) throw fail("unterminated quote");
    if (!header_seen) {
      if (*fields != std::vector<std::string>{"id", "lat", "lon", "label"}) {
        throw fail("expected header 'id,lat,lon,label'");
      }
      header_seen = true;
      continue;
    }
    if (fields->size() != 4 && fields->size() != 3) {
      throw fail("expected 4 fields, got " + std::to_string(fields->size()));
    }
    MeetingPoint m;
    m.id = (*fields)[0];
    if (m.id.empty()) throw fail("empty id");
    const auto lat = detail::parse_double((*fields)[1]);
    const auto lon = detail::parse_double((*fields)[2]);
    if (!lat || !lon) throw fail("lat/lon are not decimal numbers");
    m.location = {*lat, *lon};
    if (!is_valid(m.location)) throw fail("coordinate out of range");
    if (fields->size() == 4) m.label = (*fields)[3];
    if (!ids.insert(m.id).second) throw fail("duplicate id '" + m.id + "'");
    out.push_back(std::move(m));
  }
  if (!header_seen) throw ParseError("meeting points file is missing its header", 1);
  return out;
}

inline std::vector<MeetingPoint> load_meeting_points(const std::filesystem::path& path) {
  return parse_meeting_points(read_text(path));
}

}  // namespace dlcss
