#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "glyphometrics/error.hpp"
#include "glyphometrics/geometry/bspline.hpp"
#include "glyphometrics/geometry/curve.hpp"

namespace glyphometrics {

namespace detail {

template <typename Scalar>
BSpline<Scalar> least_squares_cubic(const Polyline2<Scalar>& pts, const std::vector<Scalar>& params,
                                    const std::vector<Scalar>& interior_knots) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  constexpr int p = 3;
  const Eigen::Index n = static_cast<Eigen::Index>(interior_knots.size()) + p + 1;
  typename BSpline<Scalar>::KnotVector knots(n + p + 1);
  for (int i = 0; i <= p; ++i) {
    knots(i) = 0;
    knots(n + i) = 1;
  }
  for (std::size_t i = 0; i < interior_knots.size(); ++i) knots(p + 1 + i) = interior_knots[i];

  // Endpoints are interpolated; the free control points solve a least-squares
  // problem with a faint second-difference penalty that keeps sparse spans sane.
  const Eigen::Index m = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index free = n - 2;
  const Scalar smooth = Scalar(1e-4);
  Matrix A = Matrix::Zero(m + free, free);
  Matrix b = Matrix::Zero(m + free, 2);
  const Point2<Scalar> first = pts.front(), last = pts.back();
  typename BSpline<Scalar>::ControlMatrix dummy = BSpline<Scalar>::ControlMatrix::Zero(2, n);
  const BSpline<Scalar> shape(p, dummy, knots);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto [offset, values] = shape.basis(params[j]);
    Point2<Scalar> rhs = pts[j];
    for (int k = 0; k <= p; ++k) {
      const Eigen::Index i = offset + k;
      if (i == 0) rhs -= values[k] * first;
      else if (i == n - 1) rhs -= values[k] * last;
      else A(j, i - 1) += values[k];
    }
    b.row(j) = rhs.transpose();
  }
  for (Eigen::Index i = 1; i <= free; ++i) {
    const Eigen::Index row = m + i - 1;
    const std::array<Scalar, 3> w = {smooth, -2 * smooth, smooth};
    for (int k = 0; k < 3; ++k) {
      const Eigen::Index idx = i - 1 + k;
      if (idx == 0) b.row(row) -= w[k] * first.transpose();
      else if (idx == n - 1) b.row(row) -= w[k] * last.transpose();
      else A(row, idx - 1) += w[k];
    }
  }
  const Matrix x = A.colPivHouseholderQr().solve(b);
  typename BSpline<Scalar>::ControlMatrix control(2, n);
  control.col(0) = first;
  control.col(n - 1) = last;
  for (Eigen::Index i = 0; i < free; ++i) control.col(i + 1) = x.row(i).transpose();
  return BSpline<Scalar>(p, control, knots);
}

}  // namespace detail

/// Cubic least-squares fit with knot refinement until every input point lies
/// within `max_error` of the curve.
template <typename Scalar>
BSpline<Scalar> fit_spline(std::span<const Point2<Scalar>> input, Scalar max_error) {
  if (input.size() < 2) throw Error(ErrorCode::invalid_input, "fit_spline needs at least 2 points");
  if (!(max_error > 0)) throw Error(ErrorCode::invalid_input, "max_error must be > 0");
  for (const auto& q : input)
    if (!is_finite(q)) throw Error(ErrorCode::invalid_input, "non-finite input point");

  Polyline2<Scalar> pts;
  for (const auto& q : input)
    if (pts.empty() || (q - pts.back()).norm() > 0) pts.push_back(q);
  if (pts.size() == 1) return BSpline<Scalar>::line(pts.front(), pts.front());
  if (pts.size() == 2) return BSpline<Scalar>::line(pts.front(), pts.back());

  std::vector<Scalar> params(pts.size(), 0);
  for (std::size_t i = 1; i < pts.size(); ++i) params[i] = params[i - 1] + (pts[i] - pts[i - 1]).norm();
  for (auto& t : params) t /= params.back();

  std::vector<Scalar> interior;
  const std::size_t max_interior = pts.size();
  while (true) {
    BSpline<Scalar> curve = detail::least_squares_cubic(pts, params, interior);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 1; j + 1 < pts.size(); ++j) params[j] = closest_parameter(curve, pts[j]).first;
      curve = detail::least_squares_cubic(pts, params, interior);
    }
    Scalar worst = 0;
    std::size_t worst_j = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const Scalar d = closest_parameter(curve, pts[j]).second;
      if (d > worst) { worst = d; worst_j = j; }
    }
    if (worst <= max_error || interior.size() >= max_interior) return curve;

    std::vector<Scalar> edges = {Scalar(0)};
    edges.insert(edges.end(), interior.begin(), interior.end());
    edges.push_back(Scalar(1));
    const Scalar tw = params[worst_j];
    std::size_t span = 0;
    while (span + 2 < edges.size() && tw >= edges[span + 1]) ++span;
    const Scalar mid = (edges[span] + edges[span + 1]) / 2;
    if (edges[span + 1] - edges[span] < Scalar(1e-9)) return curve;
    interior.insert(std::upper_bound(interior.begin(), interior.end(), mid), mid);
  }
}

template <typename Scalar>
BSpline<Scalar> fit_spline(const Polyline2<Scalar>& input, Scalar max_error) {
  return fit_spline(std::span<const Point2<Scalar>>(input.data(), input.size()), max_error);
}

}  // namespace glyphometrics
