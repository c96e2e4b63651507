#pragma once

// Dynamic longest common subsequences between a vehicle route A and a
// request route R, and the similarity score derived from them.
//
// Phase 1 assigns every request point R_j to its nearest vehicle point A_i.
// Phase 2 walks A in order and, for each A_i, keeps the shortest assigned
// link whose request index is not behind the previously chosen one.

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlcss/geo.hpp"

namespace dlcss {

/// Default acceptance threshold on the similarity score, in meters.
inline constexpr double kDefaultThresholdM = 20000.0;

/// Sparse vehicle x request distance matrix. At most one cell per column is
/// set; after phase 1 every column holds exactly one cell.
class DistanceMatrix {
 public:
  struct Cell {
    std::size_t row = 0;
    double distance_m = 0.0;
  };

  DistanceMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }

  void set(std::size_t i, std::size_t j, double distance_m) {
    if (i >= rows_ || j >= columns_.size()) {
      throw DomainError("distance matrix cell (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") out of range");
    }
    if (columns_[j]) {
      throw DomainError("distance matrix column " + std::to_string(j) +
                        " already has a set cell");
    }
    if (!(distance_m >= 0.0)) throw DomainError("distance must be non-negative");
    columns_[j] = Cell{i, distance_m};
  }

  const std::optional<Cell>& column(std::size_t j) const { return columns_.at(j); }

  std::optional<double> value(std::size_t i, std::size_t j) const {
    const auto& c = columns_.at(j);
    if (c && c->row == i) return c->distance_m;
    return std::nullopt;
  }

  std::size_t set_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.has_value();
    return n;
  }

 private:
  std::size_t rows_;
  std::vector<std::optional<Cell>> columns_;
};

/// One closed line segment linking A[a_index] and R[r_index].
struct DlcssSegment {
  double distance_m = 0.0;
  std::size_t a_index = 0;
  std::size_t r_index = 0;

  friend bool operator==(const DlcssSegment&, const DlcssSegment&) = default;
};

/// Similarity score in meters (lower is better), or NoOverlap when the
/// matched span on A has zero length. NoOverlap orders after every finite
/// score.
class Similarity {
 public:
  static constexpr Similarity meters(double v) noexcept { return Similarity(v, true); }
  static constexpr Similarity no_overlap() noexcept {
    return Similarity(std::numeric_limits<double>::infinity(), false);
  }

  constexpr bool is_finite() const noexcept { return finite_; }
  constexpr bool is_no_overlap() const noexcept { return !finite_; }

  /// Score in meters; +inf for NoOverlap.
  constexpr double value() const noexcept { return value_; }

  constexpr bool within(double threshold_m) const noexcept {
    return finite_ && value_ <= threshold_m;
  }

  friend constexpr std::partial_ordering operator<=>(const Similarity& a,
                                                     const Similarity& b) noexcept {
    if (a.finite_ != b.finite_) {
      return a.finite_ ? std::partial_ordering::less : std::partial_ordering::greater;
    }
    if (!a.finite_) return std::partial_ordering::equivalent;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(const Similarity& a, const Similarity& b) noexcept {
    return (a <=> b) == 0;
  }

  std::string to_string() const {
    return finite_ ? std::to_string(value_) : std::string("NoOverlap");
  }

 private:
  constexpr Similarity(double v, bool finite) noexcept : value_(v), finite_(finite) {}

  double value_;
  bool finite_;
};

struct DlcssResult {
  std::vector<DlcssSegment> segments;
  double sum_segments_m = 0.0;
  double l_sub_a_m = 0.0;
  double l_a_m = 0.0;
  Similarity sm = Similarity::no_overlap();
};

/// Phase 1: for every request point, the nearest vehicle point. Ties go to
/// the smaller vehicle index. Evaluates `dist` exactly |A| * |R| times.
template <typename DistanceFn = HaversineDistance>
DistanceMatrix nearest_assignment(const Route& a, const Route& r, DistanceFn&& dist = {}) {
  if (a.size() < 2 || r.size() < 2) {
    throw DomainError("both routes need at least 2 points");
  }
  DistanceMatrix dm(a.size(), r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    std::size_t best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = dist(a[i], r[j]);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    dm.set(best_i, j, best);
  }
  return dm;
}

/// Phase 2: temporally ordered selection of one segment per vehicle point.
/// Rows without a set cell at or after the request cursor are skipped.
inline std::vector<DlcssSegment> select_segments(const DistanceMatrix& dm) {
  // Bucket set cells by row; columns are visited in ascending order so
  // each bucket is sorted by j.
  std::vector<std::vector<std::size_t>> by_row(dm.rows());
  for (std::size_t j = 0; j < dm.cols(); ++j) {
    if (const auto& c = dm.column(j)) by_row[c->row].push_back(j);
  }

  std::vector<DlcssSegment> segments;
  std::size_t start_j = 0;
  for (std::size_t i = 0; i < dm.rows(); ++i) {
    std::optional<DlcssSegment> best;
    for (std::size_t j : by_row[i]) {
      if (j < start_j) continue;
      const double d = dm.column(j)->distance_m;
      if (!best || d < best->distance_m) best = DlcssSegment{d, i, j};
    }
    if (!best) continue;
    start_j = best->r_index;
    segments.push_back(*best);
  }
  return segments;
}

namespace detail {

inline DlcssResult summarize(std::vector<DlcssSegment> segments, const Route& a) {
  if (segments.empty()) throw DomainError("similarity needs at least one segment");
  DlcssResult out;
  for (const auto& s : segments) {
    if (s.a_index >= a.size()) throw DomainError("segment index outside route A");
    out.sum_segments_m += s.distance_m;
  }
  out.l_a_m = route_length(a);
  out.l_sub_a_m =
      arc_length_between(a, segments.front().a_index, segments.back().a_index);
  out.sm = out.l_sub_a_m > 0.0
               ? Similarity::meters((out.l_a_m / out.l_sub_a_m) * out.sum_segments_m)
               : Similarity::no_overlap();
  out.segments = std::move(segments);
  return out;
}

}  // namespace detail

/// Overlap-weighted segment sum: (l_A / l_Sub_A) * sum of segment lengths,
/// where l_Sub_A spans the first to the last matched vehicle point.
inline Similarity similarity_metric(const std::vector<DlcssSegment>& segments,
                                    const Route& a) {
  return detail::summarize(segments, a).sm;
}

template <typename DistanceFn = HaversineDistance>
DlcssResult compute_dlcss(const Route& a, const Route& r, DistanceFn&& dist = {}) {
  return detail::summarize(
      select_segments(nearest_assignment(a, r, std::forward<DistanceFn>(dist))), a);
}

/// Score grid over overlap fractions (rows) and segment sums (columns).
struct SweepTable {
  std::vector<double> fractions;
  std::vector<double> sums_m;
  std::vector<double> values;  // row-major

  double at(std::size_t fi, std::size_t si) const {
    return values.at(fi * sums_m.size() + si);
  }
};

inline double score_from_parts(double overlap_fraction, double segment_sum_m) {
  if (!(overlap_fraction > 0.0) || overlap_fraction > 1.0) {
    throw DomainError("overlap fraction must be in (0, 1], got " +
                      std::to_string(overlap_fraction));
  }
  if (!(segment_sum_m >= 0.0) || !std::isfinite(segment_sum_m)) {
    throw DomainError("segment sum must be finite and >= 0, got " +
                      std::to_string(segment_sum_m));
  }
  return (1.0 / overlap_fraction) * segment_sum_m;
}

inline SweepTable metric_sweep(std::vector<double> overlap_fractions,
                               std::vector<double> segment_sums_m) {
  SweepTable t{std::move(overlap_fractions), std::move(segment_sums_m), {}};
  t.values.reserve(t.fractions.size() * t.sums_m.size());
  for (double f : t.fractions) {
    for (double s : t.sums_m) t.values.push_back(score_from_parts(f, s));
  }
  return t;
}

}  // namespace dlcss
