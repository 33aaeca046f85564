#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "glyphometrics/geometry/types.hpp"

namespace glyphometrics {

namespace detail {

// The two arms of a polyline leaving an intersection point. An arm is absent
// when the point is a global endpoint of the polyline.
template <typename Scalar>
std::optional<std::array<Point2<Scalar>, 2>> arms_at(const Polyline2<Scalar>& line, bool closed,
                                                     std::size_t seg, Scalar alpha, Scalar tol_param) {
  const std::size_t nseg = line.size() - 1;
  const Point2<Scalar> a = line[seg], b = line[seg + 1];
  if (alpha > tol_param && alpha < 1 - tol_param) return std::array<Point2<Scalar>, 2>{a - b, b - a};
  // At a vertex: the one before and the one after.
  const std::size_t v = alpha <= tol_param ? seg : seg + 1;
  const bool first = v == 0, last = v == nseg;
  if ((first || last) && !closed) return std::nullopt;
  const Point2<Scalar> prev = first ? line[nseg - 1] : line[v - 1];
  const Point2<Scalar> next = last ? line[1] : line[v + 1];
  return std::array<Point2<Scalar>, 2>{prev - line[v], next - line[v]};
}

// True iff the arms of B lie strictly on different sides of the two arms of A,
// i.e. the four arms alternate around the shared point.
template <typename Scalar>
bool arms_alternate(const std::array<Point2<Scalar>, 2>& a, const std::array<Point2<Scalar>, 2>& b) {
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  constexpr Scalar eps = Scalar(1e-12);
  const auto ccw = [&](const Point2<Scalar>& from, const Point2<Scalar>& to) {
    Scalar ang = std::atan2(cross2(from, to), from.dot(to));
    if (ang < 0) ang += two_pi;
    return ang;
  };
  const Scalar split = ccw(a[0], a[1]);
  const auto side = [&](const Point2<Scalar>& d) {
    const Scalar phi = ccw(a[0], d);
    if (phi <= eps || phi >= two_pi - eps || std::abs(phi - split) <= eps) return 0;
    return phi < split ? 1 : -1;
  };
  const int s0 = side(b[0]), s1 = side(b[1]);
  return s0 != 0 && s1 != 0 && s0 != s1;
}

}  // namespace detail

/// Number of distinct transversal crossing points among the polylines.
///
/// Consecutive segments of one polyline, global polyline endpoints (stroke
/// junctions, T-joins, end-to-end meets) and tangential touches do not count.
/// Crossings through vertices are detected once via the arm-alternation test.
template <typename Scalar>
int count_crossings(const std::vector<Polyline2<Scalar>>& lines) {
  struct Seg { std::size_t line, index; };
  std::vector<Seg> segs;
  Rect2<Scalar> box;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    for (const auto& p : lines[l]) box.extend(p);
    for (std::size_t i = 0; i + 1 < lines[l].size(); ++i) segs.push_back({l, i});
  }
  if (segs.empty()) return 0;
  const Scalar tol = Scalar(1e-9) * std::max(box.diagonal(), std::numeric_limits<Scalar>::min());
  std::vector<char> closed(lines.size());
  for (std::size_t l = 0; l < lines.size(); ++l)
    closed[l] = lines[l].size() > 3 && (lines[l].front() - lines[l].back()).norm() <= tol;

  std::vector<Point2<Scalar>> found;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& A = lines[segs[i].line];
    const Point2<Scalar> a0 = A[segs[i].index], a1 = A[segs[i].index + 1];
    const Point2<Scalar> da = a1 - a0;
    const Scalar la = da.norm();
    if (la == 0) continue;
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (segs[i].line == segs[j].line) {
        const std::size_t nseg = A.size() - 1;
        const std::size_t gap = segs[j].index - segs[i].index;
        if (gap <= 1) continue;
        if (closed[segs[i].line] && gap == nseg - 1) continue;
      }
      const auto& B = lines[segs[j].line];
      const Point2<Scalar> b0 = B[segs[j].index], b1 = B[segs[j].index + 1];
      const Point2<Scalar> db = b1 - b0;
      const Scalar lb = db.norm();
      if (lb == 0) continue;
      const Scalar denom = cross2(da, db);
      if (std::abs(denom) <= Scalar(1e-12) * la * lb) continue;  // parallel or overlapping
      const Scalar alpha = cross2<Scalar>(b0 - a0, db) / denom;
      const Scalar beta = cross2<Scalar>(b0 - a0, da) / denom;
      const Scalar ta = tol / la, tb = tol / lb;
      if (alpha < -ta || alpha > 1 + ta || beta < -tb || beta > 1 + tb) continue;
      const auto arms_a = detail::arms_at(A, closed[segs[i].line], segs[i].index, alpha, ta);
      const auto arms_b = detail::arms_at(B, closed[segs[j].line], segs[j].index, beta, tb);
      if (!arms_a || !arms_b) continue;
      if (!detail::arms_alternate(*arms_a, *arms_b)) continue;
      const Point2<Scalar> p = a0 + std::clamp(alpha, Scalar(0), Scalar(1)) * da;
      const bool seen = std::any_of(found.begin(), found.end(),
                                    [&](const Point2<Scalar>& q) { return (q - p).norm() <= 1e3 * tol; });
      if (!seen) found.push_back(p);
    }
  }
  return static_cast<int>(found.size());
}

}  // namespace glyphometrics
