#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "glyphometrics/error.hpp"
#include "glyphometrics/geometry/types.hpp"

namespace glyphometrics {

/// Convex hull by Andrew's monotone chain. Counterclockwise, starting at the
/// lexicographically smallest point; collinear boundary points are dropped.
template <typename Scalar>
Polyline2<Scalar> convex_hull(std::span<const Point2<Scalar>> input) {
  if (input.empty()) throw Error(ErrorCode::invalid_input, "convex hull of an empty point set");
  Polyline2<Scalar> pts(input.begin(), input.end());
  const auto less = [](const Point2<Scalar>& a, const Point2<Scalar>& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  const auto turn = [](const Point2<Scalar>& o, const Point2<Scalar>& a, const Point2<Scalar>& b) {
    return cross2<Scalar>(a - o, b - o);
  };
  Polyline2<Scalar> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

template <typename Scalar>
Polyline2<Scalar> convex_hull(const Polyline2<Scalar>& input) {
  return convex_hull(std::span<const Point2<Scalar>>(input.data(), input.size()));
}

/// Shoelace area; positive for counterclockwise polygons.
template <typename Scalar>
Scalar polygon_area(const Polyline2<Scalar>& polygon) {
  if (polygon.size() < 3) return 0;
  Scalar twice = 0;
  for (std::size_t i = 0; i < polygon.size(); ++i)
    twice += cross2(polygon[i], polygon[(i + 1) % polygon.size()]);
  return twice / 2;
}

}  // namespace glyphometrics
