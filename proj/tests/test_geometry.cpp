#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "glyphometrics/dtw.hpp"
#include "glyphometrics/geometry.hpp"
#include "oracles.hpp"

using namespace glyphometrics;

namespace {

Spline z_curve() {
  Spline::ControlMatrix c(2, 10);
  c << 0, 0.5, 1.7, 2, 1.79, 0.21, 0, 0.3, 1.5, 2,  //
      2, 2, 2, 2, 1.79, 0.21, 0, 0, 0, 0;
  return Spline::clamped(c);
}

Spline bezier(std::initializer_list<Point> pts) {
  Spline::ControlMatrix c(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index i = 0;
  for (const auto& p : pts) c.col(i++) = p;
  return Spline::clamped(c);
}

}  // namespace

TEST_CASE("spline evaluation basics") {
  const Spline line = Spline::line({0, 0}, {3, 4});
  CHECK((line(0.5) - Point(1.5, 2)).norm() < 1e-12);
  CHECK(arc_length(line) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(arc_length(Spline::line({1, 1}, {1, 1})) == 0.0);

  const Spline z = z_curve();
  const Spline r = z.reversed();
  for (double t : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0}) CHECK((z(t) - r(1 - t)).norm() < 1e-12);

  const Spline mid = z.subcurve(0.2, 0.7);
  for (double u : {0.0, 0.25, 0.5, 1.0}) {
    const double t = 0.2 + 0.5 * u;
    // Subcurve parameters are linear in the knot domain of the original.
    CHECK((mid(u) - z(t)).norm() < 1e-9);
  }
  const Spline back = z.subcurve(0.7, 0.2);
  CHECK((back.start() - z(0.7)).norm() < 1e-12);
  CHECK((back.end() - z(0.2)).norm() < 1e-12);
}

TEST_CASE("arc length is additive and matches dense chords") {
  const Spline z = z_curve();
  const double whole = arc_length(z);
  CHECK(arc_length(z, 0.0, 0.43) + arc_length(z, 0.43, 1.0) == doctest::Approx(whole).epsilon(1e-9));
  CHECK(arc_length(z.subcurve(0.0, 0.43)) + arc_length(z.subcurve(0.43, 1.0)) ==
        doctest::Approx(whole).epsilon(1e-6));
  CHECK(oracle::chord_length(z, 200000) == doctest::Approx(whole).epsilon(1e-4));

  const Spline circle = oracle::circle_spline({0, 0}, 1.0);
  CHECK(arc_length(circle) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-3));
  CHECK(oracle::chord_length(circle, 100000) == doctest::Approx(arc_length(circle)).epsilon(1e-6));
}

TEST_CASE("curvature") {
  const Spline line = Spline::line({0, 0}, {3, 4});
  for (double t : {0.0, 0.3, 1.0}) CHECK(curvature_at(line, t) == 0.0);

  for (double r : {0.5, 1.0, 2.0, 5.0}) {
    const Spline c = oracle::circle_spline({1, -2}, r);
    for (int i = 0; i <= 40; ++i) {
      const double k = curvature_at(c, i / 40.0);
      CHECK(k > 0);  // counterclockwise
      CHECK(std::abs(k - 1 / r) <= 0.01 / r);
    }
  }
  const Spline cw = oracle::circle_spline({0, 0}, 2.0).reversed();
  CHECK(curvature_at(cw, 0.3) == doctest::Approx(-0.5).epsilon(0.01));

  const Spline z = z_curve();
  for (double t : {0.13, 0.31, 0.52, 0.77})
    CHECK(std::abs(curvature_at(z, t)) == doctest::Approx(oracle::fd_curvature(z, t)).epsilon(1e-4));

  const Spline cusp = bezier({{0, 0}, {1, 0}, {1, 0}, {0, 0.5}});
  const Spline hairpin = bezier({{0, 0}, {1, 0}, {1, 0}, {0, 0}});
  CHECK_NOTHROW(curvature_at(cusp, 0.2));
  CHECK_THROWS_AS(curvature_at(hairpin, 0.5), Error);
  try {
    curvature_at(hairpin, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::curvature_undefined);
  }
}

TEST_CASE("curvature extrema") {
  CHECK(curvature_extrema(Spline::line({0, 0}, {1, 2}), 128, 0.0).empty());
  const Spline circle = oracle::circle_spline({0, 0}, 1.0);
  CHECK(curvature_extrema(circle, 128, 0.05 * max_abs_curvature(circle, 128)).empty());

  const Spline z = z_curve();
  const auto found = curvature_extrema(z, 128, 0.05 * max_abs_curvature(z, 128));
  REQUIRE(found.size() == 2);

  // Dense scan at ten times the density, finite-difference curvature.
  const int n = 1280;
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) k[i] = oracle::fd_curvature(z, std::clamp(i / double(n - 1), 1e-4, 1 - 1e-4));
  std::vector<std::pair<double, double>> peaks;
  for (int i = 1; i + 1 < n; ++i)
    if (k[i] > k[i - 1] && k[i] >= k[i + 1]) peaks.emplace_back(k[i], i / double(n - 1));
  std::sort(peaks.rbegin(), peaks.rend());
  REQUIRE(peaks.size() >= 2);
  std::vector<double> expected = {peaks[0].second, peaks[1].second};
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 2; ++i) CHECK(std::abs(found[i] - expected[i]) <= 1.0 / 127);
}

TEST_CASE("exact bounding box") {
  const Spline circle = oracle::circle_spline({2, 3}, 1.5);
  const Rect box = bounding_box(circle);
  Rect dense;
  for (int i = 0; i <= 100000; ++i) dense.extend(circle(i / 100000.0));
  CHECK((box.min - dense.min).norm() < 1e-9);
  CHECK((box.max - dense.max).norm() < 1e-9);
  const Spline z = z_curve();
  const Rect zb = bounding_box(z);
  CHECK(zb.min.x() == doctest::Approx(0.0));
  CHECK(zb.max.y() == doctest::Approx(2.0));
}

TEST_CASE("fit_spline") {
  const Spline two = fit_spline(Polyline{{0, 0}, {2, 1}}, 0.01);
  CHECK((two.start() - Point(0, 0)).norm() < 1e-12);
  CHECK((two.end() - Point(2, 1)).norm() < 1e-12);

  Polyline collinear;
  for (int i = 0; i < 12; ++i) collinear.emplace_back(i * 0.5, i * 0.25);
  const Spline straight = fit_spline(collinear, 0.01);
  for (int i = 0; i <= 50; ++i) CHECK(std::abs(curvature_at(straight, i / 50.0)) <= 1e-9);

  Polyline arc;
  for (int i = 0; i < 32; ++i) {
    const double a = i * std::numbers::pi / 31;
    arc.emplace_back(std::cos(a), std::sin(a));
  }
  const Spline fitted = fit_spline(arc, 0.01);
  // Oracle: dense resampling of the fitted curve, nearest sample per input point.
  Polyline dense = sample(fitted, 20001);
  for (const auto& p : arc) {
    double best = 1e9;
    for (std::size_t i = 0; i + 1 < dense.size(); ++i)
      best = std::min(best, oracle::segment_distance(p, dense[i], dense[i + 1]));
    CHECK(best <= 0.01);
  }

  CHECK_THROWS_AS(fit_spline(Polyline{{0, 0}}, 0.1), Error);
  CHECK_THROWS_AS(fit_spline(Polyline{{0, 0}, {std::nan(""), 1}}, 0.1), Error);
  CHECK_THROWS_AS(fit_spline(Polyline{{0, 0}, {1, 1}}, 0.0), Error);
}

TEST_CASE("convex hull") {
  const Polyline square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  const Polyline hull = convex_hull(square);
  CHECK(hull.size() == 4);
  CHECK(polygon_area(hull) == doctest::Approx(1.0));

  const Polyline line = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  const Polyline degenerate = convex_hull(line);
  CHECK(degenerate.size() == 2);
  CHECK(polygon_area(degenerate) == 0.0);
  CHECK_THROWS_AS(convex_hull(Polyline{}), Error);

  std::mt19937_64 rng(11);
  const Polyline pts = oracle::random_points(rng, 100);
  Polyline fast = convex_hull(pts);
  CHECK(polygon_area(fast) > 0);
  const Polyline brute = oracle::hull_vertices(pts);
  auto sorted = fast;
  std::sort(sorted.begin(), sorted.end(),
            [](const Point& a, const Point& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  CHECK(sorted == brute);
}

TEST_CASE("minimum enclosing circle") {
  const Circle one = min_enclosing_circle(Polyline{{2, 3}});
  CHECK(one.radius == 0.0);
  CHECK(one.center == Point(2, 3));
  const Circle two = min_enclosing_circle(Polyline{{0, 0}, {2, 0}});
  CHECK(two.radius == doctest::Approx(1.0));
  CHECK((two.center - Point(1, 0)).norm() < 1e-12);
  const Circle sq = min_enclosing_circle(Polyline{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK((sq.center - Point(0.5, 0.5)).norm() < 1e-12);
  CHECK(sq.radius == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK_THROWS_AS(min_enclosing_circle(Polyline{}), Error);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Polyline pts = oracle::random_points(rng, 1 + trial);
    const Circle c = min_enclosing_circle(pts);
    for (const auto& p : pts) CHECK((p - c.center).norm() <= c.radius + 1e-9);
    CHECK(std::abs(c.radius - oracle::brute_enclosing_circle(pts, 1e-9).radius) <= 1e-9);
  }
}

TEST_CASE("rdp") {
  Polyline collinear;
  for (int i = 0; i < 10; ++i) collinear.emplace_back(i, 2 * i);
  CHECK(rdp_simplify(collinear, 0.1).size() == 2);

  Polyline wave;
  for (int i = 0; i <= 8; ++i) wave.emplace_back(i, i % 2);
  const Polyline kept = rdp_simplify(wave, 0.5);
  CHECK(kept.size() == wave.size());
  CHECK(oracle::max_deviation(wave, kept) <= 0.5);
  CHECK(rdp_simplify(wave, 100.0).size() == 2);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Polyline walk = {{0, 0}};
    std::normal_distribution<double> step(0, 1);
    for (int i = 0; i < 60; ++i) walk.push_back(walk.back() + Point(step(rng), step(rng)));
    const double eps = 0.2 + 0.1 * trial;
    const Polyline out = rdp_simplify(walk, eps);
    CHECK(out.front() == walk.front());
    CHECK(out.back() == walk.back());
    CHECK(oracle::max_deviation(walk, out) <= eps + 1e-12);
  }
}

TEST_CASE("crossings") {
  CHECK(count_crossings(std::vector<Polyline>{{{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}}) == 1);
  Polyline ring;
  for (int i = 0; i <= 24; ++i) {
    const double a = 2 * std::numbers::pi * i / 24;
    ring.emplace_back(std::cos(a), std::sin(a));
  }
  ring.back() = ring.front();
  CHECK(count_crossings(std::vector<Polyline>{ring}) == 0);

  Polyline eight;
  for (int i = 0; i <= 200; ++i) {
    const double a = 2 * std::numbers::pi * i / 200;
    eight.emplace_back(std::sin(a), std::sin(a) * std::cos(a));
  }
  eight.back() = eight.front();
  CHECK(count_crossings(std::vector<Polyline>{eight}) == 1);

  // T-junction and end-to-end meeting are not crossings.
  CHECK(count_crossings(std::vector<Polyline>{{{-1, 0}, {1, 0}}, {{0, 0}, {0, 1}}}) == 0);
  CHECK(count_crossings(std::vector<Polyline>{{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}}) == 0);
  // Touching without crossing.
  CHECK(count_crossings(std::vector<Polyline>{{{-1, 0}, {0, 1}, {1, 0}}, {{-1, 1}, {1, 1}}}) == 0);
  // Crossing exactly through vertices of both lines counts once.
  CHECK(count_crossings(std::vector<Polyline>{{{-1, -1}, {0, 0}, {1, 1}}, {{-1, 1}, {0, 0}, {1, -1}}}) == 1);

  // Invariance under rotation and uniform scaling.
  const double a = 0.7;
  Eigen::Matrix2d rot;
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  Polyline moved;
  for (const auto& p : eight) moved.push_back(3.5 * (rot * p));
  CHECK(count_crossings(std::vector<Polyline>{moved}) == 1);
}

TEST_CASE("dtw") {
  Eigen::VectorXd a(3), b(3);
  a << 1, 2, 3;
  b << 2, 3, 4;
  const auto r = dtw(a, b);
  CHECK(r.cost == doctest::Approx(2.0));
  CHECK(r.cost == doctest::Approx(oracle::dtw_by_enumeration({1, 2, 3}, {2, 3, 4})));
  CHECK(dtw(a, a).cost == 0.0);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(3 + trial % 4), y(2 + trial % 5);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    const Eigen::VectorXd ex = Eigen::Map<Eigen::VectorXd>(x.data(), x.size());
    const Eigen::VectorXd ey = Eigen::Map<Eigen::VectorXd>(y.data(), y.size());
    CHECK(dtw(ex, ey).cost == doctest::Approx(oracle::dtw_by_enumeration(x, y)).epsilon(1e-12));
    CHECK(dtw(ex, ey).cost == dtw(ey, ex).cost);
    CHECK(dtw(ex, ey).path_length == dtw(ey, ex).path_length);
  }
}
