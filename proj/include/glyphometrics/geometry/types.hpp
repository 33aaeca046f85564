#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace glyphometrics {

// Canonical coordinates are y-up. Angles are degrees counterclockwise from +x.
template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point = Point2<double>;

template <typename Scalar>
using Polyline2 = std::vector<Point2<Scalar>>;
using Polyline = Polyline2<double>;

template <typename Scalar>
struct Rect2 {
  Point2<Scalar> min{std::numeric_limits<Scalar>::infinity(), std::numeric_limits<Scalar>::infinity()};
  Point2<Scalar> max{-std::numeric_limits<Scalar>::infinity(), -std::numeric_limits<Scalar>::infinity()};

  bool empty() const { return !(min.x() <= max.x() && min.y() <= max.y()); }
  Scalar width() const { return empty() ? Scalar(0) : max.x() - min.x(); }
  Scalar height() const { return empty() ? Scalar(0) : max.y() - min.y(); }
  Scalar area() const { return width() * height(); }
  Scalar diagonal() const { return std::hypot(width(), height()); }

  void extend(const Point2<Scalar>& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Rect2& other) {
    if (other.empty()) return;
    extend(other.min);
    extend(other.max);
  }
};
using Rect = Rect2<double>;

template <typename Scalar>
struct Circle2 {
  Point2<Scalar> center = Point2<Scalar>::Zero();
  Scalar radius = 0;

  Scalar area() const { return std::numbers::pi_v<Scalar> * radius * radius; }
  bool contains(const Point2<Scalar>& p, Scalar slack = 0) const {
    return (p - center).norm() <= radius + slack;
  }
};
using Circle = Circle2<double>;

template <typename Scalar>
bool is_finite(const Point2<Scalar>& p) {
  return std::isfinite(p.x()) && std::isfinite(p.y());
}

template <typename Scalar>
Scalar cross2(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Angle of a vector in degrees, wrapped to [0, 360).
template <typename Scalar>
Scalar angle_deg(const Point2<Scalar>& v) {
  Scalar a = std::atan2(v.y(), v.x()) * Scalar(180) / std::numbers::pi_v<Scalar>;
  if (a < 0) a += Scalar(360);
  if (a >= Scalar(360)) a -= Scalar(360);
  return a;
}

template <typename Scalar>
Scalar wrap_deg(Scalar a) {
  a = std::fmod(a, Scalar(360));
  if (a < 0) a += Scalar(360);
  if (a >= Scalar(360)) a -= Scalar(360);
  return a;
}

// Unsigned angle between two directions in degrees, [0, 180].
template <typename Scalar>
Scalar turn_angle_deg(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  const Scalar na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return 0;
  return std::atan2(std::abs(cross2(a, b)), a.dot(b)) * Scalar(180) / std::numbers::pi_v<Scalar>;
}

template <typename Scalar>
Rect2<Scalar> bounding_box(const Polyline2<Scalar>& points) {
  Rect2<Scalar> r;
  for (const auto& p : points) r.extend(p);
  return r;
}

}  // namespace glyphometrics
