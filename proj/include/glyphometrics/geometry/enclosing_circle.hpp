#pragma once

#include <algorithm>
#include <random>
#include <span>
#include <vector>

#include "glyphometrics/error.hpp"
#include "glyphometrics/geometry/types.hpp"

namespace glyphometrics {

namespace detail {

template <typename Scalar>
Circle2<Scalar> circle_from(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return {(a + b) / 2, (a - b).norm() / 2};
}

// Circumcircle; for (near-)collinear triples the widest pair's diameter circle.
template <typename Scalar>
Circle2<Scalar> circle_from(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c) {
  const Point2<Scalar> ab = b - a, ac = c - a;
  const Scalar d = 2 * cross2(ab, ac);
  const Scalar scale = std::max({ab.squaredNorm(), ac.squaredNorm(), (c - b).squaredNorm()});
  if (std::abs(d) <= Scalar(1e-14) * scale) {
    Circle2<Scalar> best = circle_from(a, b);
    for (const auto& cand : {circle_from(a, c), circle_from(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const Scalar ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
  const Point2<Scalar> center(a.x() + (ac.y() * ab2 - ab.y() * ac2) / d,
                              a.y() + (ab.x() * ac2 - ac.x() * ab2) / d);
  return {center, std::max({(center - a).norm(), (center - b).norm(), (center - c).norm()})};
}

}  // namespace detail

/// Smallest enclosing circle (Welzl, iterative move-to-front form). The input
/// is shuffled with a fixed seed so results are reproducible.
template <typename Scalar>
Circle2<Scalar> min_enclosing_circle(std::span<const Point2<Scalar>> input) {
  if (input.empty()) throw Error(ErrorCode::invalid_input, "enclosing circle of an empty point set");
  Polyline2<Scalar> pts(input.begin(), input.end());
  std::mt19937_64 rng(0x5eedULL);
  std::shuffle(pts.begin(), pts.end(), rng);

  const Rect2<Scalar> box = bounding_box(pts);
  const Scalar slack = Scalar(1e-12) * std::max(box.diagonal(), Scalar(1));
  const auto inside = [&](const Circle2<Scalar>& c, const Point2<Scalar>& p) { return c.contains(p, slack); };

  Circle2<Scalar> c{pts[0], 0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(c, pts[i])) continue;
    c = {pts[i], 0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(c, pts[j])) continue;
      c = detail::circle_from(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (inside(c, pts[k])) continue;
        c = detail::circle_from(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

template <typename Scalar>
Circle2<Scalar> min_enclosing_circle(const Polyline2<Scalar>& input) {
  return min_enclosing_circle(std::span<const Point2<Scalar>>(input.data(), input.size()));
}

}  // namespace glyphometrics
