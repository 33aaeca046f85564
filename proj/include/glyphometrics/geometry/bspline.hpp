#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "glyphometrics/error.hpp"
#include "glyphometrics/geometry/types.hpp"

namespace glyphometrics {

/// Planar B-spline of degree 1..3 with an arbitrary (non-periodic) knot vector.
///
/// The public parameter `t` always runs over [0, 1] and is mapped affinely onto
/// the knot domain [U_p, U_n]; derivatives are taken with respect to `t`.
/// Control points may be non-finite: structural checks happen here, value
/// checks are left to glyph validation so a bad file can still be reported on.
template <typename Scalar>
class BSpline {
 public:
  using PointType = Point2<Scalar>;
  using ControlMatrix = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;
  using KnotVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Frame = Eigen::Matrix<Scalar, 2, 3>;  // position, first and second derivative

  static constexpr int kMaxDegree = 3;

  BSpline() : BSpline(line(PointType::Zero(), PointType::Zero())) {}

  BSpline(int degree, ControlMatrix control, KnotVector knots)
      : degree_(degree), control_(std::move(control)), knots_(std::move(knots)) {
    check_structure();
  }

  /// Clamped spline with uniformly spaced interior knots.
  static BSpline clamped(const ControlMatrix& control, int degree = 3) {
    const Eigen::Index n = control.cols();
    if (n < degree + 1) {
      throw Error(ErrorCode::invalid_input, "clamped spline of degree " + std::to_string(degree) +
                                                " needs at least " + std::to_string(degree + 1) +
                                                " control points");
    }
    KnotVector knots(n + degree + 1);
    const Eigen::Index interior = n - degree - 1;
    for (Eigen::Index i = 0; i < knots.size(); ++i) {
      if (i <= degree) {
        knots(i) = 0;
      } else if (i >= n) {
        knots(i) = 1;
      } else {
        knots(i) = Scalar(i - degree) / Scalar(interior + 1);
      }
    }
    return BSpline(degree, control, knots);
  }

  /// Straight segment (degree 1, so derivatives are exact).
  static BSpline line(const PointType& a, const PointType& b) {
    ControlMatrix c(2, 2);
    c.col(0) = a;
    c.col(1) = b;
    KnotVector k(4);
    k << 0, 0, 1, 1;
    return BSpline(1, c, k);
  }

  int degree() const { return degree_; }
  Eigen::Index size() const { return control_.cols(); }
  const ControlMatrix& control_points() const { return control_; }
  const KnotVector& knots() const { return knots_; }
  PointType control_point(Eigen::Index i) const { return control_.col(i); }

  Scalar domain_begin() const { return knots_(degree_); }
  Scalar domain_end() const { return knots_(size()); }

  Scalar to_knot(Scalar t) const { return domain_begin() + t * (domain_end() - domain_begin()); }
  Scalar to_param(Scalar u) const { return (u - domain_begin()) / (domain_end() - domain_begin()); }

  PointType operator()(Scalar t) const { return derivatives(t, 0).col(0); }
  PointType start() const { return (*this)(Scalar(0)); }
  PointType end() const { return (*this)(Scalar(1)); }

  /// Position and derivatives up to `order` (<= 2) at parameter t in [0, 1].
  Frame derivatives(Scalar t, int order = 2) const {
    const Scalar u = to_knot(std::clamp(t, Scalar(0), Scalar(1)));
    const Eigen::Index span = find_span(u);
    std::array<std::array<Scalar, kMaxDegree + 1>, 3> ders{};
    basis_derivatives(span, u, order, ders);
    Frame out = Frame::Zero();
    const Scalar scale = domain_end() - domain_begin();
    Scalar factor = 1;
    for (int k = 0; k <= order; ++k) {
      for (int j = 0; j <= degree_; ++j) out.col(k) += ders[k][j] * control_.col(span - degree_ + j);
      out.col(k) *= factor;
      factor *= scale;
    }
    return out;
  }

  /// Index of the first nonzero basis function at t and the p+1 nonzero values.
  std::pair<Eigen::Index, std::array<Scalar, kMaxDegree + 1>> basis(Scalar t) const {
    const Scalar u = to_knot(std::clamp(t, Scalar(0), Scalar(1)));
    const Eigen::Index span = find_span(u);
    std::array<std::array<Scalar, kMaxDegree + 1>, 3> ders{};
    basis_derivatives(span, u, 0, ders);
    return {span - degree_, ders[0]};
  }

  /// Same curve traversed in the opposite direction.
  BSpline reversed() const {
    ControlMatrix c = control_.rowwise().reverse();
    KnotVector k(knots_.size());
    const Scalar lo = knots_(0), hi = knots_(knots_.size() - 1);
    for (Eigen::Index i = 0; i < k.size(); ++i) k(i) = lo + hi - knots_(knots_.size() - 1 - i);
    return BSpline(degree_, std::move(c), std::move(k));
  }

  /// Exact restriction to [t0, t1] by knot insertion; t0 > t1 yields the reversed piece.
  BSpline subcurve(Scalar t0, Scalar t1) const {
    if (t0 > t1) return subcurve(t1, t0).reversed();
    t0 = std::clamp(t0, Scalar(0), Scalar(1));
    t1 = std::clamp(t1, Scalar(0), Scalar(1));
    if (t1 - t0 <= Scalar(1e-14)) {
      const PointType p = (*this)(t0);
      return line(p, p);
    }
    const Scalar u0 = snap(to_knot(t0));
    const Scalar u1 = snap(to_knot(t1));
    BSpline work = *this;
    work = work.with_multiplicity(u0, degree_);
    work = work.with_multiplicity(u1, degree_);
    const KnotVector& U = work.knots_;
    Eigen::Index e0 = 0;
    for (Eigen::Index i = 0; i < U.size(); ++i)
      if (U(i) == u0) e0 = i;
    Eigen::Index f1 = U.size() - 1;
    for (Eigen::Index i = U.size() - 1; i >= 0; --i)
      if (U(i) == u1) f1 = i;
    const Eigen::Index first = e0 - degree_;
    const Eigen::Index count = f1 - e0 + degree_;
    ControlMatrix c = work.control_.middleCols(first, count);
    KnotVector k(count + degree_ + 1);
    Eigen::Index w = 0;
    for (int i = 0; i <= degree_; ++i) k(w++) = u0;
    for (Eigen::Index i = e0 + 1; i < f1; ++i) k(w++) = U(i);
    for (int i = 0; i <= degree_; ++i) k(w++) = u1;
    return BSpline(degree_, std::move(c), std::move(k));
  }

  /// Control points mapped through x -> A x + b (B-splines are affine invariant).
  BSpline transformed(const Eigen::Matrix<Scalar, 2, 2>& linear, const PointType& offset) const {
    ControlMatrix c = (linear * control_).colwise() + offset;
    return BSpline(degree_, std::move(c), knots_);
  }

  /// Parameters (in t) of the distinct knots inside the domain, including 0 and 1.
  std::vector<Scalar> breakpoints() const {
    std::vector<Scalar> out;
    for (Eigen::Index i = degree_; i <= size(); ++i) {
      const Scalar t = to_param(knots_(i));
      if (out.empty() || t > out.back()) out.push_back(t);
    }
    return out;
  }

  bool operator==(const BSpline& o) const {
    return degree_ == o.degree_ && control_.cols() == o.control_.cols() &&
           knots_.size() == o.knots_.size() && control_ == o.control_ && knots_ == o.knots_;
  }

 private:
  int degree_ = 3;
  ControlMatrix control_;
  KnotVector knots_;

  void check_structure() const {
    if (degree_ < 1 || degree_ > kMaxDegree) {
      throw Error(ErrorCode::invalid_input,
                  "spline degree " + std::to_string(degree_) + " unsupported (1..3)");
    }
    const Eigen::Index n = control_.cols();
    if (n < degree_ + 1) {
      throw Error(ErrorCode::invalid_input, "spline of degree " + std::to_string(degree_) +
                                                " needs at least " + std::to_string(degree_ + 1) +
                                                " control points");
    }
    if (knots_.size() != n + degree_ + 1) {
      throw Error(ErrorCode::invalid_input, "knot count " + std::to_string(knots_.size()) +
                                                " != control points + degree + 1 = " +
                                                std::to_string(n + degree_ + 1));
    }
    for (Eigen::Index i = 0; i < knots_.size(); ++i) {
      if (!std::isfinite(knots_(i))) throw Error(ErrorCode::invalid_input, "non-finite knot");
      if (i > 0 && knots_(i) < knots_(i - 1))
        throw Error(ErrorCode::invalid_input, "knots must be non-decreasing");
    }
    if (!(knots_(degree_) < knots_(n))) throw Error(ErrorCode::invalid_input, "empty knot domain");
  }

  Scalar snap(Scalar u) const {
    const Scalar tol = Scalar(1e-13) * (domain_end() - domain_begin());
    for (Eigen::Index i = 0; i < knots_.size(); ++i)
      if (std::abs(knots_(i) - u) <= tol) return knots_(i);
    return u;
  }

  // Largest span index k in [p, n-1] with U_k <= u < U_{k+1} (closed at the domain end).
  Eigen::Index find_span(Scalar u) const {
    const Eigen::Index n = size();
    if (u >= knots_(n)) {
      Eigen::Index k = n - 1;
      while (k > degree_ && knots_(k) == knots_(n)) --k;
      return k;
    }
    if (u <= knots_(degree_)) {
      Eigen::Index k = degree_;
      while (k < n - 1 && knots_(k + 1) <= u) ++k;
      return k;
    }
    Eigen::Index lo = degree_, hi = n;
    while (hi - lo > 1) {
      const Eigen::Index mid = (lo + hi) / 2;
      if (u < knots_(mid)) hi = mid; else lo = mid;
    }
    return lo;
  }

  // Nonzero basis functions and their derivatives at u (Piegl & Tiller A2.3).
  void basis_derivatives(Eigen::Index span, Scalar u, int order,
                         std::array<std::array<Scalar, kMaxDegree + 1>, 3>& ders) const {
    const int p = degree_;
    Scalar ndu[kMaxDegree + 1][kMaxDegree + 1];
    Scalar left[kMaxDegree + 1], right[kMaxDegree + 1];
    ndu[0][0] = 1;
    for (int j = 1; j <= p; ++j) {
      left[j] = u - knots_(span + 1 - j);
      right[j] = knots_(span + j) - u;
      Scalar saved = 0;
      for (int r = 0; r < j; ++r) {
        ndu[j][r] = right[r + 1] + left[j - r];
        const Scalar temp = ndu[r][j - 1] / ndu[j][r];
        ndu[r][j] = saved + right[r + 1] * temp;
        saved = left[j - r] * temp;
      }
      ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
    Scalar a[2][kMaxDegree + 1] = {};
    for (int r = 0; r <= p; ++r) {
      int s1 = 0, s2 = 1;
      a[0][0] = 1;
      for (int k = 1; k <= std::min(order, p); ++k) {
        Scalar d = 0;
        const int rk = r - k, pk = p - k;
        if (r >= k) {
          a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
          d = a[s2][0] * ndu[rk][pk];
        }
        const int j1 = rk >= -1 ? 1 : -rk;
        const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
        for (int j = j1; j <= j2; ++j) {
          a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
          d += a[s2][j] * ndu[rk + j][pk];
        }
        if (r <= pk) {
          a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
          d += a[s2][k] * ndu[r][pk];
        }
        ders[k][r] = d;
        std::swap(s1, s2);
      }
    }
    Scalar factor = p;
    for (int k = 1; k <= std::min(order, p); ++k) {
      for (int j = 0; j <= p; ++j) ders[k][j] *= factor;
      factor *= (p - k);
    }
    for (int k = p + 1; k <= order; ++k)
      for (int j = 0; j <= p; ++j) ders[k][j] = 0;
  }

  // Insert u (Boehm) until its multiplicity reaches `target`.
  BSpline with_multiplicity(Scalar u, int target) const {
    BSpline work = *this;
    while (true) {
      int mult = 0;
      for (Eigen::Index i = 0; i < work.knots_.size(); ++i)
        if (work.knots_(i) == u) ++mult;
      if (mult >= target) return work;
      work = work.insert_knot(u);
    }
  }

  BSpline insert_knot(Scalar u) const {
    const int p = degree_;
    const Eigen::Index n = size();
    const Eigen::Index k = find_span(u);
    ControlMatrix q(2, n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i <= k - p) {
        q.col(i) = control_.col(i);
      } else if (i >= k + 1) {
        q.col(i) = control_.col(i - 1);
      } else {
        const Scalar alpha = (u - knots_(i)) / (knots_(i + p) - knots_(i));
        q.col(i) = (1 - alpha) * control_.col(i - 1) + alpha * control_.col(i);
      }
    }
    KnotVector nk(knots_.size() + 1);
    nk.head(k + 1) = knots_.head(k + 1);
    nk(k + 1) = u;
    nk.tail(knots_.size() - k - 1) = knots_.tail(knots_.size() - k - 1);
    return BSpline(p, std::move(q), std::move(nk));
  }
};

using Spline = BSpline<double>;

}  // namespace glyphometrics
