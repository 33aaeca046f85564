#pragma once

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>

#include "glyphometrics/error.hpp"
#include "glyphometrics/geometry/types.hpp"

namespace glyphometrics {

template <typename Scalar>
Scalar point_segment_distance(const Point2<Scalar>& p, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  const Point2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == 0) return (p - a).norm();
  const Scalar t = std::clamp((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

template <typename Scalar>
Scalar point_polyline_distance(const Point2<Scalar>& p, const Polyline2<Scalar>& line) {
  if (line.size() == 1) return (p - line.front()).norm();
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i)
    best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  return best;
}

/// Ramer-Douglas-Peucker. Distances are to the chord segment (not its
/// supporting line), so every dropped point is within epsilon of the output.
template <typename Scalar>
Polyline2<Scalar> rdp_simplify(const Polyline2<Scalar>& points, Scalar epsilon) {
  if (points.size() < 2) throw Error(ErrorCode::invalid_input, "rdp needs at least 2 points");
  if (!(epsilon > 0)) throw Error(ErrorCode::invalid_input, "rdp epsilon must be > 0");
  std::vector<char> keep(points.size(), 0);
  keep[0] = 1;
  keep[points.size() - 1] = 1;
  std::vector<std::pair<std::size_t, std::size_t>> stack = {{0, points.size() - 1}};
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    Scalar worst = -1;
    std::size_t index = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const Scalar d = point_segment_distance(points[i], points[lo], points[hi]);
      if (d > worst) { worst = d; index = i; }
    }
    if (worst > epsilon) {
      keep[index] = 1;
      stack.emplace_back(lo, index);
      stack.emplace_back(index, hi);
    }
  }
  Polyline2<Scalar> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (keep[i]) out.push_back(points[i]);
  return out;
}

}  // namespace glyphometrics
