#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "glyphometrics/error.hpp"
#include "glyphometrics/geometry/bspline.hpp"
#include "glyphometrics/geometry/types.hpp"

namespace glyphometrics {

namespace detail {

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 7> kGaussNodes = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
inline constexpr std::array<double, 7> kGaussWeights = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

template <typename Scalar, typename F>
Scalar gauss7(const F& f, Scalar a, Scalar b) {
  const Scalar half = (b - a) / 2, mid = (a + b) / 2;
  Scalar sum = 0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
    sum += Scalar(kGaussWeights[i]) * f(mid + half * Scalar(kGaussNodes[i]));
  return sum * half;
}

// `noise` is an absolute per-unit-parameter floor below which differences are
// rounding, not quadrature error.
template <typename Scalar, typename F>
Scalar adaptive_gauss(const F& f, Scalar a, Scalar b, Scalar whole, Scalar rel_tol, Scalar noise, int depth) {
  const Scalar m = (a + b) / 2;
  const Scalar left = gauss7(f, a, m), right = gauss7(f, m, b);
  const Scalar both = left + right;
  if (depth <= 0 || std::abs(both - whole) <= rel_tol * std::abs(both) + noise * (b - a)) return both;
  return adaptive_gauss(f, a, m, left, rel_tol, noise, depth - 1) +
         adaptive_gauss(f, m, b, right, rel_tol, noise, depth - 1);
}

// Scale of a spline's control polygon; used to make "zero velocity" relative.
template <typename Scalar>
Scalar control_extent(const BSpline<Scalar>& s) {
  const auto& c = s.control_points();
  return (c.rowwise().maxCoeff() - c.rowwise().minCoeff()).norm();
}

}  // namespace detail

/// Arc length by adaptive Gauss-Legendre quadrature on each knot span.
template <typename Scalar>
Scalar arc_length(const BSpline<Scalar>& s, Scalar t0 = 0, Scalar t1 = 1, Scalar rel_tol = Scalar(1e-10)) {
  if (t1 < t0) std::swap(t0, t1);
  const auto speed = [&s](Scalar t) { return s.derivatives(t, 1).col(1).norm(); };
  Scalar total = 0;
  const Scalar noise = Scalar(1e-13) * s.control_points().cwiseAbs().maxCoeff();
  const auto bps = s.breakpoints();
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    const Scalar a = std::max(bps[i], t0), b = std::min(bps[i + 1], t1);
    if (b <= a) continue;
    total += detail::adaptive_gauss(speed, a, b, detail::gauss7(speed, a, b), rel_tol, noise, 30);
  }
  return total;
}

/// Signed curvature at t; throws curvature-undefined where the velocity vanishes.
template <typename Scalar>
Scalar curvature_at(const BSpline<Scalar>& s, Scalar t) {
  const auto d = s.derivatives(t, 2);
  const Point2<Scalar> v = d.col(1), a = d.col(2);
  const Scalar speed = v.norm();
  if (!(speed > Scalar(1e-9) * detail::control_extent(s))) {
    throw Error(ErrorCode::curvature_undefined, "velocity vanishes at t=" + std::to_string(double(t)));
  }
  return cross2(v, a) / (speed * speed * speed);
}

/// Curvature or nothing, for sampling loops that skip cusps.
template <typename Scalar>
std::optional<Scalar> try_curvature_at(const BSpline<Scalar>& s, Scalar t) {
  const auto d = s.derivatives(t, 2);
  const Point2<Scalar> v = d.col(1), a = d.col(2);
  const Scalar speed = v.norm();
  if (!(speed > Scalar(1e-9) * detail::control_extent(s))) return std::nullopt;
  return cross2(v, a) / (speed * speed * speed);
}

/// Unit tangent in the direction of increasing t, falling back to a short
/// chord where the derivative vanishes.
template <typename Scalar>
Point2<Scalar> unit_tangent(const BSpline<Scalar>& s, Scalar t) {
  Point2<Scalar> v = s.derivatives(t, 1).col(1);
  if (v.norm() > Scalar(1e-9) * detail::control_extent(s)) return v.normalized();
  const Scalar h = Scalar(1e-4);
  const Scalar ta = std::max(Scalar(0), t - h), tb = std::min(Scalar(1), t + h);
  v = s(tb) - s(ta);
  if (v.norm() > 0) return v.normalized();
  v = s.end() - s.start();
  return v.norm() > 0 ? Point2<Scalar>(v.normalized()) : Point2<Scalar>(1, 0);
}

/// Largest |curvature| over `samples` uniform parameters; cusps are skipped.
template <typename Scalar>
Scalar max_abs_curvature(const BSpline<Scalar>& s, int samples) {
  Scalar best = 0;
  for (int i = 0; i < samples; ++i) {
    const Scalar t = Scalar(i) / Scalar(samples - 1);
    if (auto k = try_curvature_at(s, t)) best = std::max(best, std::abs(*k));
  }
  return best;
}

/// Parameters of the prominent local maxima of |curvature| (equivalently the
/// maxima and minima of signed curvature), endpoints excluded.
///
/// Prominence follows the topographic definition: height of the peak above
/// the higher of the two lowest points that separate it from higher terrain
/// (or from the ends of the curve). Peaks are refined by a parabola through
/// the three samples around them.
template <typename Scalar>
std::vector<Scalar> curvature_extrema(const BSpline<Scalar>& s, int samples, Scalar prominence) {
  if (samples < 16) throw Error(ErrorCode::invalid_input, "curvature_extrema needs >= 16 samples");
  if (prominence < 0) throw Error(ErrorCode::invalid_input, "prominence must be >= 0");
  std::vector<Scalar> k(samples);
  const Scalar step = Scalar(1) / Scalar(samples - 1);
  for (int i = 0; i < samples; ++i) {
    const auto c = try_curvature_at(s, Scalar(i) * step);
    k[i] = c ? std::abs(*c) : Scalar(0);
  }
  const Scalar floor = std::max(prominence, Scalar(1e-9) * (*std::max_element(k.begin(), k.end()) + Scalar(1e-300)));
  std::vector<Scalar> out;
  for (int i = 1; i + 1 < samples; ++i) {
    // Plateaus count once, at their left edge.
    if (!(k[i] > k[i - 1])) continue;
    int j = i;
    while (j + 1 < samples && k[j + 1] == k[i]) ++j;
    if (j + 1 >= samples || !(k[j + 1] < k[i])) continue;
    Scalar left_min = k[i];
    for (int a = i - 1; a >= 0 && k[a] <= k[i]; --a) left_min = std::min(left_min, k[a]);
    Scalar right_min = k[i];
    for (int b = j + 1; b < samples && k[b] <= k[i]; ++b) right_min = std::min(right_min, k[b]);
    const Scalar prom = k[i] - std::max(left_min, right_min);
    if (!(prom > floor)) continue;
    Scalar t = Scalar(i) * step;
    if (j == i) {
      const Scalar denom = k[i - 1] - 2 * k[i] + k[i + 1];
      if (denom < 0) t += step * Scalar(0.5) * (k[i - 1] - k[i + 1]) / denom;
    } else {
      t = (Scalar(i) + Scalar(j)) * Scalar(0.5) * step;
    }
    out.push_back(std::clamp(t, step, Scalar(1) - step));
  }
  return out;
}

/// Uniform-parameter samples, both ends included.
template <typename Scalar>
Polyline2<Scalar> sample(const BSpline<Scalar>& s, int count) {
  if (count < 2) throw Error(ErrorCode::invalid_input, "need at least 2 samples");
  Polyline2<Scalar> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(s(Scalar(i) / Scalar(count - 1)));
  return out;
}

/// Exact axis-aligned bounds: endpoints of every span plus the roots of x'(u), y'(u).
template <typename Scalar>
Rect2<Scalar> bounding_box(const BSpline<Scalar>& s) {
  Rect2<Scalar> r;
  const auto bps = s.breakpoints();
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    const Scalar a = bps[i], b = bps[i + 1], m = (a + b) / 2, h = (b - a) / 2;
    r.extend(s(a));
    r.extend(s(b));
    // On one span each coordinate's derivative is a polynomial of degree <= 2;
    // it is fitted from interior samples so multiple knots do not leak in.
    const Point2<Scalar> dl = s.derivatives(m - h / 2, 1).col(1);
    const Point2<Scalar> dm = s.derivatives(m, 1).col(1);
    const Point2<Scalar> dr = s.derivatives(m + h / 2, 1).col(1);
    for (int axis = 0; axis < 2; ++axis) {
      // q(x) = c0 + c1 x + c2 x^2 with x in [-1, 1].
      const Scalar c0 = dm(axis);
      const Scalar c1 = dr(axis) - dl(axis);
      const Scalar c2 = 2 * (dr(axis) + dl(axis) - 2 * dm(axis));
      std::array<Scalar, 2> roots{};
      int n = 0;
      if (std::abs(c2) > Scalar(1e-14) * (std::abs(c0) + std::abs(c1) + std::abs(c2))) {
        const Scalar disc = c1 * c1 - 4 * c2 * c0;
        if (disc >= 0) {
          const Scalar sq = std::sqrt(disc);
          roots[n++] = (-c1 - sq) / (2 * c2);
          roots[n++] = (-c1 + sq) / (2 * c2);
        }
      } else if (std::abs(c1) > 0) {
        roots[n++] = -c0 / c1;
      }
      for (int q = 0; q < n; ++q)
        if (roots[q] > -1 && roots[q] < 1) r.extend(s(m + h * roots[q]));
    }
  }
  return r;
}

/// Closest point on the curve to p: dense scan, then Newton on |C(t) - p|^2.
template <typename Scalar>
std::pair<Scalar, Scalar> closest_parameter(const BSpline<Scalar>& s, const Point2<Scalar>& p, int scan = 64) {
  scan = std::max(scan, 16 * static_cast<int>(s.breakpoints().size()));
  Scalar best_t = 0, best_d = (s(Scalar(0)) - p).squaredNorm();
  for (int i = 1; i < scan; ++i) {
    const Scalar t = Scalar(i) / Scalar(scan - 1);
    const Scalar d = (s(t) - p).squaredNorm();
    if (d < best_d) { best_d = d; best_t = t; }
  }
  Scalar t = best_t;
  for (int it = 0; it < 20; ++it) {
    const auto f = s.derivatives(t, 2);
    const Point2<Scalar> diff = f.col(0) - p;
    const Scalar g = diff.dot(f.col(1));
    const Scalar h = f.col(1).squaredNorm() + diff.dot(f.col(2));
    if (!(h > 0)) break;
    const Scalar next = std::clamp(t - g / h, Scalar(0), Scalar(1));
    if (std::abs(next - t) < Scalar(1e-15)) { t = next; break; }
    t = next;
  }
  const Scalar d = (s(t) - p).squaredNorm();
  if (d < best_d) { best_d = d; best_t = t; }
  return {best_t, std::sqrt(best_d)};
}

}  // namespace glyphometrics
