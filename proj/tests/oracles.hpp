#pragma once

// Independent brute-force references used by the unit and acceptance tests.
// They favour obviously-correct over fast.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "glyphometrics/geometry.hpp"

namespace oracle {

using glyphometrics::Point;
using glyphometrics::Polyline;
using glyphometrics::Spline;

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Hull vertices as the endpoints of every edge (i, j) that has all other
// points on its left, or strictly between i and j when collinear. O(n^3).
inline Polyline hull_vertices(const Polyline& pts) {
  std::vector<char> vertex(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j || pts[i] == pts[j]) continue;
      bool edge = true;
      for (std::size_t k = 0; k < pts.size() && edge; ++k) {
        if (k == i || k == j) continue;
        const double c = cross(pts[i], pts[j], pts[k]);
        if (c < 0) edge = false;
        if (c == 0) {
          const double along = (pts[k] - pts[i]).dot(pts[j] - pts[i]);
          if (along < 0 || along > (pts[j] - pts[i]).squaredNorm()) edge = false;
        }
      }
      if (edge) vertex[i] = vertex[j] = 1;
    }
  }
  Polyline out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (vertex[i]) out.push_back(pts[i]);
  if (out.empty() && !pts.empty()) out.push_back(pts[0]);
  const auto less = [](const Point& a, const Point& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); };
  std::sort(out.begin(), out.end(), less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Disc {
  Point center;
  double radius;
};

// Smallest circle through 2 or 3 of the points that contains all of them.
inline Disc brute_enclosing_circle(const Polyline& pts, double slack) {
  Disc best{pts[0], pts.size() == 1 ? 0.0 : std::numeric_limits<double>::infinity()};
  const auto covers = [&](const Disc& d) {
    for (const auto& p : pts)
      if ((p - d.center).norm() > d.radius + slack) return false;
    return true;
  };
  const auto consider = [&](const Disc& d) {
    if (d.radius < best.radius && covers(d)) best = d;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      consider({(pts[i] + pts[j]) / 2, (pts[i] - pts[j]).norm() / 2});
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        // Circumcentre from the perpendicular-bisector linear system.
        Eigen::Matrix2d A;
        A.row(0) = 2 * (pts[j] - pts[i]).transpose();
        A.row(1) = 2 * (pts[k] - pts[i]).transpose();
        const Eigen::Vector2d rhs(pts[j].squaredNorm() - pts[i].squaredNorm(),
                                  pts[k].squaredNorm() - pts[i].squaredNorm());
        if (std::abs(A.determinant()) < 1e-14) continue;
        const Point c = A.fullPivLu().solve(rhs);
        consider({c, std::max({(c - pts[i]).norm(), (c - pts[j]).norm(), (c - pts[k]).norm()})});
      }
    }
  }
  return best;
}

inline double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double l2 = ab.squaredNorm();
  const double t = l2 == 0 ? 0.0 : std::clamp((p - a).dot(ab) / l2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

inline double max_deviation(const Polyline& input, const Polyline& simplified) {
  double worst = 0;
  for (const auto& p : input) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < simplified.size(); ++i)
      best = std::min(best, segment_distance(p, simplified[i], simplified[i + 1]));
    worst = std::max(worst, best);
  }
  return worst;
}

inline double chord_length(const Spline& s, int samples) {
  double total = 0;
  Point prev = s(0.0);
  for (int i = 1; i <= samples; ++i) {
    const Point p = s(double(i) / samples);
    total += (p - prev).norm();
    prev = p;
  }
  return total;
}

// |curvature| from central finite differences of positions only.
inline double fd_curvature(const Spline& s, double t, double h = 1e-5) {
  const Point a = s(t - h), b = s(t), c = s(t + h);
  const Point d1 = (c - a) / (2 * h), d2 = (c - 2 * b + a) / (h * h);
  return std::abs(d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.norm(), 3);
}

// Raw DTW cost by enumerating every monotone alignment path.
inline double dtw_by_enumeration(const std::vector<double>& a, const std::vector<double>& b) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    acc += std::abs(a[i] - b[j]);
    if (i + 1 == a.size() && j + 1 == b.size()) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, acc);
    if (i + 1 < a.size()) walk(i + 1, j, acc);
    if (j + 1 < b.size()) walk(i, j + 1, acc);
  };
  walk(0, 0, 0);
  return best;
}

// Closed uniform cubic approximating a circle; control radius chosen so the
// curve's mean radius is r.
inline Spline circle_spline(const Point& center, double r, int n = 32) {
  const double step = 2 * std::numbers::pi / n;
  const double R = r * 6 / (4 + 2 * std::cos(step)) ;
  Spline::ControlMatrix c(2, n + 3);
  for (int i = 0; i < n + 3; ++i)
    c.col(i) = center + R * Point(std::cos(i * step), std::sin(i * step));
  Spline::KnotVector k(n + 7);
  for (int i = 0; i < n + 7; ++i) k(i) = i;
  return Spline(3, c, k);
}

inline Polyline random_points(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Polyline out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng));
  return out;
}

}  // namespace oracle
