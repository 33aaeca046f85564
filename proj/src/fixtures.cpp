#include "glyphometrics/fixtures.hpp"

#include <cmath>
#include <numbers>

namespace glyphometrics::fixtures {

namespace {

Point polar(double degrees, double length) {
  const double a = degrees * std::numbers::pi / 180.0;
  return length * Point(std::cos(a), std::sin(a));
}

Spline from_points(std::initializer_list<Point> pts) {
  Spline::ControlMatrix c(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index i = 0;
  for (const auto& p : pts) c.col(i++) = p;
  return Spline::clamped(c);
}

// Clamped cubic following a polygon: four collinear control points per leg
// keep the legs straight, and corner i (at v[i + 1]) is rounded over d[i] on
// either side.
Spline rounded_polygon(const Polyline& v, const std::vector<double>& d) {
  Polyline ctrl;
  const std::size_t legs = v.size() - 1;
  for (std::size_t i = 0; i < legs; ++i) {
    const Point u = (v[i + 1] - v[i]).normalized();
    const Point s = i == 0 ? v[i] : Point(v[i] + d[i - 1] * u);
    const Point e = i + 1 == legs ? v[i + 1] : Point(v[i + 1] - d[i] * u);
    for (int k = 0; k < 4; ++k) ctrl.push_back(s + (e - s) * (k / 3.0));
  }
  Spline::ControlMatrix c(2, static_cast<Eigen::Index>(ctrl.size()));
  for (std::size_t i = 0; i < ctrl.size(); ++i) c.col(static_cast<Eigen::Index>(i)) = ctrl[i];
  return Spline::clamped(c);
}

Trajectory single_stroke(const std::string& id, std::vector<Pass> path, Provenance prov = Provenance::recorded) {
  Trajectory t;
  t.glyph_id = id;
  t.provenance = prov;
  t.pen_strokes.push_back({std::move(path)});
  return t;
}

Glyph make_glyph(std::string id, std::vector<Spline> segments) {
  Glyph g;
  g.id = std::move(id);
  g.script_id = "fixtures";
  g.segments = std::move(segments);
  return g;
}

}  // namespace

Sample worked_example() {
  const Point a(0.0, 2.0);
  Polyline tail = {a};
  for (auto [deg, len] : {std::pair{280.0, 1.2}, {140.0, 0.8}, {310.0, 1.1}, {220.0, 0.6}, {270.0, 0.8}})
    tail.push_back(tail.back() + polar(deg, len));
  // Sharper bends get wider rounding so the four curvature peaks are of
  // comparable height.

  Glyph g = make_glyph("worked-example", {Spline::line(Point(-0.3, 0.0), a), Spline::line(a, Point(1.2, 2.0)),
                                          rounded_polygon(tail, {0.1, 0.3, 0.06, 0.03})});
  g.baseline_y = 0.0;
  g.label = "hooked";
  Trajectory t = single_stroke(g.id, {Pass{0, false, false}, Pass{1, false, false}, Pass{1, true, true},
                                      Pass{2, false, false}});
  return {std::move(g), std::move(t)};
}

Sample s_curve() {
  const double x[] = {0, 0.5, 1.7, 2, 1.79, 0.21, 0, 0.3, 1.5, 2};
  const double y[] = {2, 2, 2, 2, 1.79, 0.21, 0, 0, 0, 0};
  Spline::ControlMatrix c(2, 10);
  for (int i = 0; i < 10; ++i) c.col(i) = Point(x[i], y[i]);
  Glyph g = make_glyph("s-curve", {Spline::clamped(c)});
  Trajectory t = single_stroke(g.id, {Pass{0, false, false}});
  return {std::move(g), std::move(t)};
}

Sample straight(const Point& a, const Point& b) {
  Glyph g = make_glyph("straight", {Spline::line(a, b)});
  Trajectory t = single_stroke(g.id, {Pass{0, false, false}});
  return {std::move(g), std::move(t)};
}

Sample l_shape() {
  Glyph g = make_glyph("l-shape", {Spline::line(Point(0, 2), Point(0, 0)), Spline::line(Point(0, 0), Point(1, 0))});
  Trajectory t = single_stroke(g.id, {Pass{0, false, false}, Pass{1, false, false}});
  return {std::move(g), std::move(t)};
}

Sample two_strokes(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  Glyph g = make_glyph("two-strokes", {Spline::line(a0, a1), Spline::line(b0, b1)});
  Trajectory t;
  t.glyph_id = g.id;
  t.provenance = Provenance::recorded;
  t.pen_strokes = {{{Pass{0, false, false}}}, {{Pass{1, false, false}}}};
  return {std::move(g), std::move(t)};
}

Spline circle_spline(const Point& center, double r, int n) {
  const double step = 2 * std::numbers::pi / n;
  // Control polygon radius that puts the curve's knot points on the circle.
  const double big = r * 6 / (4 + 2 * std::cos(step));
  Spline::ControlMatrix c(2, n + 3);
  for (int i = 0; i < n + 3; ++i) c.col(i) = center + big * Point(std::cos(i * step), std::sin(i * step));
  Spline::KnotVector k(n + 7);
  for (int i = 0; i < n + 7; ++i) k(i) = i;
  return Spline(3, c, k);
}

Sample circle(double r, const Point& center, int control_points) {
  Glyph g = make_glyph("circle", {circle_spline(center, r, control_points)});
  Trajectory t = single_stroke(g.id, {Pass{0, false, false}});
  return {std::move(g), std::move(t)};
}

Sample square(double side) {
  const Point tl(0, side), tr(side, side), br(side, 0), bl(0, 0);
  Glyph g = make_glyph("square", {Spline::line(tl, tr), Spline::line(tr, br), Spline::line(br, bl),
                                  Spline::line(bl, tl)});
  Trajectory t = single_stroke(g.id, {Pass{0, false, false}, Pass{1, false, false}, Pass{2, false, false},
                                      Pass{3, false, false}});
  return {std::move(g), std::move(t)};
}

// ---------------------------------------------------------------------------
// Synthetic glyphs

namespace {

struct Builder {
  std::mt19937_64& rng;
  Glyph glyph;
  Trajectory traj;
  double bend = 0.15;  // control-point offset as a fraction of the chord

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  // Cubic from p to q bowed sideways; appended as a forward pass.
  void segment(const Point& p, const Point& q, std::vector<Pass>& path) {
    const Point d = q - p;
    const Point n(-d.y(), d.x());
    const double b1 = uniform(-bend, bend), b2 = uniform(-bend, bend);
    glyph.segments.push_back(from_points({p, p + d / 3 + b1 * n, p + 2 * d / 3 + b2 * n, q}));
    path.push_back(Pass{static_cast<int>(glyph.segments.size()) - 1, false, false});
  }

  // Next node from `p`: a step heading down or right, staying below `top`.
  Point step(const Point& p, double top, double x_lo, double x_hi) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double deg = pick(0, 2) == 0 ? uniform(-35.0, 10.0) : uniform(200.0, 320.0);
      const Point q = p + polar(deg, uniform(0.35, 0.7));
      if (q.y() < top - 0.1 && q.y() > -0.6 && q.x() > x_lo && q.x() < x_hi) return q;
    }
    return p + Point(0.0, -0.4);
  }

  void chain(const Point& start, int segments, double x_lo, double x_hi, std::vector<Pass>& path) {
    Point p = start;
    for (int i = 0; i < segments; ++i) {
      const Point q = step(p, start.y(), x_lo, x_hi);
      segment(p, q, path);
      p = q;
    }
  }

  // Closed loop of 2 to 4 segments through the start, first heading down and
  // to the right (clockwise).
  void loop(const Point& start, int segments, std::vector<Pass>& path) {
    const Point right = start + Point(uniform(0.35, 0.6), -uniform(0.5, 0.8));
    const Point bottom = start + Point(uniform(-0.1, 0.2), -uniform(1.0, 1.3));
    const Point left = start + Point(-uniform(0.35, 0.6), -uniform(0.5, 0.8));
    if (segments == 2) {
      segment(start, right, path);
      glyph.segments.push_back(from_points({right, bottom, left, start}));
      path.push_back(Pass{static_cast<int>(glyph.segments.size()) - 1, false, false});
      return;
    }
    segment(start, right, path);
    segment(right, bottom, path);
    if (segments == 4) {
      segment(bottom, left, path);
      segment(left, start, path);
    } else {
      glyph.segments.push_back(from_points({bottom, left, left + Point(0.0, 0.4), start}));
      path.push_back(Pass{static_cast<int>(glyph.segments.size()) - 1, false, false});
    }
  }

  // Chain in, a short spur that is immediately retraced, chain out.
  void spur(const Point& start, int in, int out, double x_lo, double x_hi, std::vector<Pass>& path) {
    Point p = start;
    for (int i = 0; i < in; ++i) {
      const Point q = step(p, start.y(), x_lo, x_hi);
      segment(p, q, path);
      p = q;
    }
    const Point tip = p + polar(uniform(-20.0, 20.0), uniform(0.2, 0.3));
    segment(p, tip, path);
    path.push_back(Pass{path.back().segment, true, true});
    for (int i = 0; i < out; ++i) {
      Point q = step(p, start.y(), x_lo, x_hi);
      // Leave the junction downwards so the spur is not continued straight.
      if (q.y() > p.y() - 0.2) q = p + Point(uniform(-0.2, 0.1), -uniform(0.4, 0.6));
      segment(p, q, path);
      p = q;
    }
  }

  // One pen stroke starting at `start`, using exactly `budget` segments.
  void component(const Point& start, int budget, double x_lo, double x_hi) {
    std::vector<Pass> path;
    const int kind = pick(0, 9);
    if (budget >= 3 && kind < 2) {
      const int in = pick(1, budget - 2);
      spur(start, in, budget - 1 - in, x_lo, x_hi, path);
    } else if (budget >= 2 && budget <= 4 && kind < 4) {
      loop(start, budget, path);
    } else {
      chain(start, budget, x_lo, x_hi, path);
    }
    traj.pen_strokes.push_back({std::move(path)});
  }
};

}  // namespace

Sample synthetic(std::mt19937_64& rng, const std::string& id, int max_segments) {
  if (max_segments < 1) throw Error(ErrorCode::invalid_input, "synthetic glyphs need at least one segment");
  Builder b{rng, {}, {}};
  b.glyph.id = id;
  b.glyph.script_id = "synthetic";
  b.traj.glyph_id = id;
  b.traj.provenance = Provenance::recorded;

  const int total = b.pick(1, std::min(max_segments, 6));
  const bool two = total >= 2 && b.pick(0, 2) == 0;
  if (two) {
    const int first = b.pick(1, total - 1);
    b.component(Point(b.uniform(0.0, 0.3), 1.5), first, -0.8, 1.2);
    b.component(Point(b.uniform(2.0, 2.3), b.uniform(1.0, 1.3)), total - first, 1.6, 3.6);
  } else {
    b.component(Point(b.uniform(0.0, 0.3), 1.5), total, -1.0, 1.8);
  }
  return {std::move(b.glyph), std::move(b.traj)};
}

SyntheticScript synthetic_script(int stage, int glyphs, std::uint64_t seed) {
  if (stage < 0 || stage > 2) throw Error(ErrorCode::invalid_input, "script stage must be 0, 1 or 2");
  if (glyphs < 1) throw Error(ErrorCode::invalid_input, "a script needs at least one glyph");
  static const char* kNames[] = {"early", "middle", "late"};
  SyntheticScript out;
  out.corpus.id = std::string("stage-") + kNames[stage];
  out.corpus.name = std::string("Synthetic script, ") + kNames[stage] + " stage";
  out.corpus.baseline_y = 0.0;

  std::mt19937_64 rng(seed + 7919u * static_cast<std::uint64_t>(stage));
  // Later stages are wider, rounder and use more segments.
  const double widen = 1.0 + 0.35 * stage;
  const double lean = 8.0 * stage;
  for (int i = 0; i < glyphs; ++i) {
    const std::string id = out.corpus.id + "-" + std::to_string(i);
    Sample s = synthetic(rng, id, 3 + 2 * stage);
    Eigen::Matrix2d a;
    const double sh = std::tan(lean * std::numbers::pi / 180.0);
    a << widen, sh, 0.0, 1.0;
    s.glyph = transformed(s.glyph, a, Point::Zero());
    s.glyph.script_id = out.corpus.id;
    s.glyph.label = "c" + std::to_string(i % 25);
    s.glyph.usage_frequency = 1.0 + std::uniform_int_distribution<int>(0, 9)(rng);
    out.corpus.glyphs.push_back(std::move(s.glyph));
    out.trajectories.emplace(id, std::move(s.trajectory));
  }
  return out;
}

const std::vector<std::string>& document_names() {
  static const std::vector<std::string> names = {"worked_example", "s_curve",     "basic",
                                                 "stage-early",    "stage-middle", "stage-late"};
  return names;
}

CorpusDocument document(const std::string& name, int glyphs, bool with_trajectories) {
  CorpusDocument doc;
  const auto add = [&](Sample s, const std::string& id) {
    s.glyph.id = id;
    s.glyph.script_id = doc.corpus.id;
    s.trajectory.glyph_id = id;
    s.trajectory.provenance = Provenance::recorded;
    if (with_trajectories) doc.trajectories[id] = s.trajectory;
    doc.corpus.glyphs.push_back(std::move(s.glyph));
  };
  for (int stage = 0; stage < 3 && name.rfind("stage-", 0) == 0; ++stage) {
    auto script = synthetic_script(stage, glyphs, 2024);
    if (name != script.corpus.id) continue;
    doc.corpus = script.corpus;
    if (with_trajectories)
      for (auto& [id, t] : script.trajectories) {
        t.provenance = Provenance::recorded;
        doc.trajectories[id] = t;
      }
    return doc;
  }
  doc.corpus.id = name;
  doc.corpus.baseline_y = 0.0;
  if (name == "worked_example") {
    doc.corpus.name = "Hooked character";
    add(worked_example(), "hooked");
  } else if (name == "s_curve") {
    doc.corpus.name = "S curve";
    add(s_curve(), "s");
  } else if (name == "basic") {
    doc.corpus.name = "Basic shapes";
    add(straight({0, 2}, {0, 0}), "vertical");
    add(straight({0, 0}, {2, 0}), "horizontal");
    add(l_shape(), "l");
    add(circle(1.0, Point(1, 1)), "circle");
    add(square(2.0), "square");
    add(two_strokes({0, 2}, {0, 0}, {1, 2}, {1, 0}), "two-bars");
  } else {
    throw Error(ErrorCode::invalid_input, "unknown fixture '" + name + "'");
  }
  return doc;
}

}  // namespace glyphometrics::fixtures
