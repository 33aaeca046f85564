#include "glyphometrics/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glyphometrics {

void validate(const SegmentationConfig& cfg) {
  if (cfg.curvature_samples < 16) throw Error(ErrorCode::invalid_input, "curvature_samples must be >= 16");
  if (!(cfg.curvature_prominence >= 0 && cfg.curvature_prominence <= 1))
    throw Error(ErrorCode::invalid_input, "curvature_prominence must be in [0, 1]");
  if (!(cfg.sharp_junction_threshold_deg > 0 && cfg.sharp_junction_threshold_deg < 180))
    throw Error(ErrorCode::invalid_input, "sharp_junction_threshold_deg must be in (0, 180)");
  if (!(cfg.retrace_hausdorff_tol > 0)) throw Error(ErrorCode::invalid_input, "retrace_hausdorff_tol must be > 0");
}

DirectionCode quantize_angle(double degrees) {
  if (!std::isfinite(degrees)) throw Error(ErrorCode::invalid_input, "non-finite angle");
  // Sectors counterclockwise from E; a boundary belongs to the sector after it.
  static constexpr std::array<DirectionCode, 8> ccw = {DirectionCode::E, DirectionCode::NE, DirectionCode::N,
                                                       DirectionCode::NW, DirectionCode::W, DirectionCode::SW,
                                                       DirectionCode::S, DirectionCode::SE};
  const double a = wrap_deg(degrees);
  const int sector = static_cast<int>(std::floor((a + 22.5) / 45.0)) % 8;
  return ccw[sector];
}

UpDown classify_angle(double degrees) {
  const double a = wrap_deg(degrees);
  return (a >= 210.0 && a <= 330.0) ? UpDown::down : UpDown::up;
}

DirectionCode quantize_direction(const PrimitiveStroke& s) {
  if (!(s.length > 0)) throw Error(ErrorCode::invalid_input, "direction of a zero-length stroke");
  return quantize_angle(s.net_angle);
}

UpDown classify_updown(const PrimitiveStroke& s) {
  if (!(s.length > 0)) throw Error(ErrorCode::invalid_input, "up/down class of a zero-length stroke");
  return classify_angle(s.net_angle);
}

Polyline stroke_polyline(const PrimitiveStroke& s, int samples_per_piece) {
  Polyline out;
  for (const auto& piece : s.pieces) {
    Polyline part = sample(piece, samples_per_piece);
    out.insert(out.end(), part.begin() + (out.empty() ? 0 : 1), part.end());
  }
  return out;
}

namespace {

double directed_hausdorff(const Polyline& a, const Polyline& b) {
  double worst = 0;
  for (const auto& p : a) worst = std::max(worst, point_polyline_distance(p, b));
  return worst;
}

int priority(LandmarkKind k) {
  switch (k) {
    case LandmarkKind::pen_up:
    case LandmarkKind::pen_down: return 3;
    case LandmarkKind::retrace_turn: return 2;
    case LandmarkKind::sharp_junction: return 1;
    case LandmarkKind::curvature_extremum: return 0;
  }
  return 0;
}

bool is_pen_event(LandmarkKind k) { return k == LandmarkKind::pen_up || k == LandmarkKind::pen_down; }

struct Layout {
  std::vector<std::vector<Spline>> passes;  // [pen stroke][pass], writing direction

  Layout(const Glyph& g, const Trajectory& t) {
    for (const auto& ps : t.pen_strokes) {
      passes.emplace_back();
      for (const auto& p : ps.path) passes.back().push_back(directed(g, p));
    }
  }

  int last_pass(int k) const { return static_cast<int>(passes[k].size()) - 1; }

  // Pass boundaries are written as the start of the following pass.
  TrajectoryPosition canonical(TrajectoryPosition p) const {
    if (p.t >= 1.0 && p.pass < last_pass(p.pen_stroke)) return {p.pen_stroke, p.pass + 1, 0.0};
    return p;
  }

  Point at(const TrajectoryPosition& p) const { return passes[p.pen_stroke][p.pass](p.t); }
};

PrimitiveStroke make_stroke(std::vector<Spline> pieces, bool visible, int pen_stroke, double tol) {
  PrimitiveStroke s;
  s.pieces = std::move(pieces);
  s.visible = visible;
  s.pen_stroke = pen_stroke;
  s.start = s.pieces.front().start();
  s.end = s.pieces.back().end();
  for (const auto& p : s.pieces) s.length += arc_length(p);
  const Point chord = s.end - s.start;
  if (chord.norm() > tol) {
    s.net_angle = angle_deg(chord);
  } else if (s.length > 0) {
    // Closed stroke: fall back to the initial heading.
    s.net_angle = angle_deg(unit_tangent(s.pieces.front(), 0.0));
  } else {
    s.net_angle = 0;
  }
  s.direction = quantize_angle(s.net_angle);
  s.updown = classify_angle(s.net_angle);
  return s;
}

}  // namespace

std::vector<RetracePair> detect_retraces(const std::vector<PrimitiveStroke>& strokes, double tol) {
  std::vector<RetracePair> out;
  for (std::size_t i = 0; i + 1 < strokes.size(); ++i) {
    const auto& a = strokes[i];
    const auto& b = strokes[i + 1];
    if (!a.visible || !b.visible) continue;
    if (!((a.end - a.start).dot(b.end - b.start) < 0)) continue;
    const Polyline pa = stroke_polyline(a), pb = stroke_polyline(b);
    if (std::max(directed_hausdorff(pa, pb), directed_hausdorff(pb, pa)) <= tol)
      out.push_back({static_cast<int>(i), static_cast<int>(i + 1)});
  }
  return out;
}

std::vector<LandmarkPoint> detect_landmarks(const Glyph& g, const Trajectory& t, const SegmentationConfig& cfg) {
  validate(cfg);
  require_valid(g, t);
  const Layout lay(g, t);
  const int samples = cfg.curvature_samples;
  const double step = 1.0 / (samples - 1);

  double kmax = 0;
  for (const auto& s : g.segments) kmax = std::max(kmax, max_abs_curvature(s, samples));
  const double floor = cfg.curvature_prominence * kmax;
  const double thr = cfg.sharp_junction_threshold_deg;

  std::vector<LandmarkPoint> found;
  const auto add = [&](TrajectoryPosition pos, LandmarkKind kind) {
    pos = lay.canonical(pos);
    found.push_back({lay.at(pos), kind, LandmarkSource::automatic, pos});
  };

  const int strokes = static_cast<int>(t.pen_strokes.size());
  for (int k = 0; k < strokes; ++k) {
    const auto& path = t.pen_strokes[k].path;
    for (int j = 0; j < static_cast<int>(path.size()); ++j) {
      const Spline& d = lay.passes[k][j];
      for (double u : curvature_extrema(d, samples, floor)) add({k, j, u}, LandmarkKind::curvature_extremum);

      // Corners inside a segment (repeated knots).
      const auto bps = d.breakpoints();
      for (std::size_t b = 1; b + 1 < bps.size(); ++b) {
        const double h = 1e-7;
        const Point before = d.derivatives(bps[b] - h, 1).col(1), after = d.derivatives(bps[b] + h, 1).col(1);
        if (before.norm() > 0 && after.norm() > 0 && turn_angle_deg(before, after) > thr)
          add({k, j, bps[b]}, LandmarkKind::sharp_junction);
      }

      if (j + 1 < static_cast<int>(path.size())) {
        if (path[j + 1].retrace) {
          add({k, j + 1, 0.0}, LandmarkKind::retrace_turn);
        } else {
          const Point in = unit_tangent(d, 1.0), out = unit_tangent(lay.passes[k][j + 1], 0.0);
          if (turn_angle_deg(in, out) > thr) add({k, j + 1, 0.0}, LandmarkKind::sharp_junction);
        }
      }
    }
    if (k > 0) add({k, 0, 0.0}, LandmarkKind::pen_down);
    if (k + 1 < strokes) add({k, lay.last_pass(k), 1.0}, LandmarkKind::pen_up);
  }

  std::sort(found.begin(), found.end(), [](const LandmarkPoint& a, const LandmarkPoint& b) {
    if (a.position != b.position) return a.position < b.position;
    return priority(a.kind) > priority(b.kind);
  });

  // A curvature extremum within one sampling step of a junction or pen event
  // is the same event seen twice.
  const auto near_event = [&](const LandmarkPoint& ce) {
    const auto& p = ce.position;
    for (const auto& o : found) {
      if (o.kind == LandmarkKind::curvature_extremum || o.position.pen_stroke != p.pen_stroke) continue;
      const auto& q = o.position;
      if (q.pass == p.pass && std::abs(q.t - p.t) <= step + 1e-12) return true;
      if (q.pass == p.pass + 1 && q.t == 0.0 && p.t >= 1.0 - step - 1e-12) return true;
    }
    return false;
  };
  std::vector<LandmarkPoint> out;
  for (const auto& l : found) {
    if (l.kind == LandmarkKind::curvature_extremum && near_event(l)) continue;
    if (!out.empty() && out.back().position == l.position) continue;  // sorted: higher priority kept
    out.push_back(l);
  }
  return out;
}

SegmentationResult segment_strokes(const Glyph& g, const Trajectory& t, std::vector<LandmarkPoint> landmarks,
                                   const SegmentationConfig& cfg) {
  validate(cfg);
  require_valid(g, t);
  const Layout lay(g, t);
  const double tol = coincidence_tolerance(g);
  const int strokes = static_cast<int>(t.pen_strokes.size());

  for (auto& l : landmarks) {
    const auto& p = l.position;
    if (p.pen_stroke < 0 || p.pen_stroke >= strokes || p.pass < 0 || p.pass > lay.last_pass(p.pen_stroke) ||
        !(p.t >= 0 && p.t <= 1))
      throw Error(ErrorCode::invalid_input, "landmark position outside the trajectory");
    l.position = lay.canonical(l.position);
  }
  std::stable_sort(landmarks.begin(), landmarks.end(), [](const LandmarkPoint& a, const LandmarkPoint& b) {
    return a.position < b.position;
  });

  SegmentationResult res;
  res.landmarks = landmarks;
  for (int k = 0; k < strokes; ++k) {
    const int last = lay.last_pass(k);
    std::vector<TrajectoryPosition> cuts = {{k, 0, 0.0}};
    for (const auto& l : landmarks) {
      if (l.position.pen_stroke != k || is_pen_event(l.kind)) continue;
      const auto& p = l.position;
      if ((p.pass == 0 && p.t == 0.0) || (p.pass == last && p.t == 1.0)) continue;
      if (cuts.back() == p) continue;
      cuts.push_back(p);
    }
    cuts.push_back({k, last, 1.0});

    if (k > 0) {
      const Point a = res.strokes.back().end, b = lay.at({k, 0, 0.0});
      res.strokes.push_back(make_stroke({Spline::line(a, b)}, false, -1, tol));
    }
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const auto& from = cuts[c];
      const auto& to = cuts[c + 1];
      std::vector<Spline> pieces;
      for (int j = from.pass; j <= to.pass; ++j) {
        const double a = j == from.pass ? from.t : 0.0;
        const double b = j == to.pass ? to.t : 1.0;
        if (b - a <= 1e-15) continue;
        pieces.push_back(a == 0.0 && b == 1.0 ? lay.passes[k][j] : lay.passes[k][j].subcurve(a, b));
      }
      if (pieces.empty()) continue;
      res.strokes.push_back(make_stroke(std::move(pieces), true, k, tol));
    }
  }
  for (std::size_t i = 0; i < res.strokes.size(); ++i) {
    res.strokes[i].index = static_cast<int>(i);
    if (res.strokes[i].visible) res.stroke_inventory_key.push_back(res.strokes[i].direction);
  }
  res.retraces = detect_retraces(res.strokes, cfg.retrace_hausdorff_tol * bounding_box(g).diagonal());
  return res;
}

SegmentationResult segment(const Glyph& g, const Trajectory& t, const SegmentationConfig& cfg) {
  return segment_strokes(g, t, detect_landmarks(g, t, cfg), cfg);
}

std::pair<TrajectoryPosition, double> locate(const Glyph& g, const Trajectory& t, const Point& p) {
  require_valid(g, t);
  const Layout lay(g, t);
  TrajectoryPosition best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(lay.passes.size()); ++k)
    for (int j = 0; j <= lay.last_pass(k); ++j) {
      const auto [u, d] = closest_parameter(lay.passes[k][j], p);
      if (d < best_d) {
        best_d = d;
        best = {k, j, u};
      }
    }
  return {lay.canonical(best), best_d};
}

SegmentationResult override_landmarks(const Glyph& g, const Trajectory& t, const SegmentationResult& current,
                                      const std::vector<Point>& add, const std::vector<int>& remove,
                                      const SegmentationConfig& cfg, LandmarkKind added_kind) {
  if (is_pen_event(added_kind) || added_kind == LandmarkKind::retrace_turn)
    throw Error(ErrorCode::invalid_input, "manual landmarks must be curvature extrema or sharp junctions");
  std::vector<char> drop(current.landmarks.size(), 0);
  for (int r : remove) {
    if (r < 0 || r >= static_cast<int>(current.landmarks.size()))
      throw Error(ErrorCode::invalid_input, "landmark index " + std::to_string(r) + " out of range");
    if (is_pen_event(current.landmarks[r].kind))
      throw Error(ErrorCode::invalid_input, "pen events follow the trajectory and cannot be removed");
    drop[r] = 1;
  }
  std::vector<LandmarkPoint> next;
  for (std::size_t i = 0; i < current.landmarks.size(); ++i)
    if (!drop[i]) next.push_back(current.landmarks[i]);

  const double tol = coincidence_tolerance(g);
  const Layout lay(g, t);
  for (const auto& p : add) {
    if (!is_finite(p)) throw Error(ErrorCode::invalid_input, "non-finite landmark point");
    const auto [pos, dist] = locate(g, t, p);
    if (dist > tol) {
      throw Error(ErrorCode::invalid_input, "landmark point (" + std::to_string(p.x()) + ", " +
                                                std::to_string(p.y()) + ") is off the trajectory by " +
                                                std::to_string(dist));
    }
    if ((pos.pass == 0 && pos.t == 0.0) || (pos.pass == lay.last_pass(pos.pen_stroke) && pos.t == 1.0))
      throw Error(ErrorCode::invalid_input, "landmark point is a pen-stroke endpoint");
    const Point at = lay.at(pos);
    for (const auto& l : next)
      if (l.position.pen_stroke == pos.pen_stroke && (l.position == pos || (l.location - at).norm() <= tol))
        throw Error(ErrorCode::invalid_input, "a landmark already exists at that point");
    next.push_back({at, added_kind, LandmarkSource::manual, pos});
  }
  return segment_strokes(g, t, std::move(next), cfg);
}

}  // namespace glyphometrics
