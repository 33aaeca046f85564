#include "glyphometrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "glyphometrics/dtw.hpp"

namespace glyphometrics {

namespace {

double turn_between(double a_deg, double b_deg) {
  const double d = std::abs(wrap_deg(b_deg - a_deg));
  return std::min(d, 360.0 - d);
}

std::vector<const PrimitiveStroke*> visible(const SegmentationResult& seg) {
  std::vector<const PrimitiveStroke*> out;
  for (const auto& s : seg.strokes)
    if (s.visible) out.push_back(&s);
  return out;
}

int count_kind(const SegmentationResult& seg, LandmarkKind kind) {
  return static_cast<int>(std::count_if(seg.landmarks.begin(), seg.landmarks.end(),
                                        [&](const LandmarkPoint& l) { return l.kind == kind; }));
}

Polyline glyph_samples(const Glyph& g, int samples_per_segment) {
  Polyline pts;
  for (const auto& line : to_polyline(g, samples_per_segment)) pts.insert(pts.end(), line.begin(), line.end());
  return pts;
}

// Hull of the sampled outline; throws when it has no area.
double hull_area(const Glyph& g, int samples_per_segment, const Polyline& pts) {
  const double area = polygon_area(convex_hull(pts));
  const double diag = bounding_box(g).diagonal();
  if (!(area > 1e-12 * diag * diag))
    throw Error(ErrorCode::metric_undefined, "convex hull of glyph '" + g.id + "' has zero area");
  (void)samples_per_segment;
  return area;
}

// Path in writing (or storage) order as dense samples with cumulative arc length.
struct DensePath {
  Polyline points;
  std::vector<double> arc;
};

void append_curve(DensePath& path, const Spline& s, int samples) {
  const Polyline pts = sample(s, samples);
  const bool first = path.points.empty();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (first && i == 0) {
      path.points.push_back(pts[0]);
      path.arc.push_back(0.0);
      continue;
    }
    // A new curve starts where the pen lands; jumps between curves add no length.
    const double step = i == 0 ? 0.0 : (pts[i] - pts[i - 1]).norm();
    path.points.push_back(pts[i]);
    path.arc.push_back(path.arc.back() + step);
  }
}

}  // namespace

double length(const SegmentationResult& seg) {
  double total = 0;
  for (const auto& s : seg.strokes) total += s.length;
  return total;
}

double divergence(const Glyph& g, const Trajectory& t) {
  require_valid(g, t);
  return (pen_stroke_end(g, t.pen_strokes.back()) - pen_stroke_start(g, t.pen_strokes.front())).norm();
}

double size(const Glyph& g) {
  const Rect box = bounding_box(g);
  if (box.empty()) throw Error(ErrorCode::degenerate_glyph, "glyph '" + g.id + "' is empty");
  return box.area();
}

double lb_index(const Glyph& g) {
  const Rect box = bounding_box(g);
  if (box.empty() || !(box.width() > 0))
    throw Error(ErrorCode::lb_index_undefined, "glyph '" + g.id + "' has zero width");
  return box.height() / box.width();
}

double avg_curvature(const SegmentationResult& seg, int samples_per_piece) {
  if (samples_per_piece < 2) throw Error(ErrorCode::invalid_input, "need at least 2 curvature samples");
  double weighted = 0, total = 0;
  for (const auto* s : visible(seg)) {
    for (const auto& piece : s->pieces) {
      const double dt = 1.0 / (samples_per_piece - 1);
      for (int i = 0; i < samples_per_piece; ++i) {
        const double t = i * dt;
        const auto k = try_curvature_at(piece, t);
        if (!k) continue;
        const double w = piece.derivatives(t, 1).col(1).norm() * dt * ((i == 0 || i + 1 == samples_per_piece) ? 0.5 : 1.0);
        weighted += std::abs(*k) * w;
        total += w;
      }
    }
  }
  if (!(total > 0)) throw Error(ErrorCode::metric_undefined, "no visible length to average curvature over");
  return weighted / total;
}

double compactness(double length, double size) {
  if (!(size > 0)) throw Error(ErrorCode::metric_undefined, "compactness needs a non-zero size");
  return length / size;
}

double openness(double divergence, double length) {
  if (!(length > 0)) throw Error(ErrorCode::metric_undefined, "openness needs a non-zero length");
  return divergence / length;
}

std::pair<double, double> ascendancy_descendance(const SegmentationResult& seg, std::optional<double> baseline_y) {
  if (!baseline_y) throw Error(ErrorCode::metric_unavailable, "no baseline defined");
  const double b = *baseline_y;
  double above = 0, below = 0, on = 0;
  for (const auto* s : visible(seg)) {
    for (const auto& piece : s->pieces) {
      const Rect box = bounding_box(piece);
      const double eps = 1e-12 * std::max({1.0, std::abs(b), box.diagonal()});
      const auto side = [&](double t) {
        const double y = piece(t).y() - b;
        return y > eps ? 1 : (y < -eps ? -1 : 0);
      };
      // Parameter cuts: a fine grid plus every crossing of the baseline.
      const int n = 256;
      std::vector<double> cuts;
      for (int i = 0; i <= n; ++i) cuts.push_back(double(i) / n);
      for (int i = 0; i < n; ++i) {
        double lo = double(i) / n, hi = double(i + 1) / n;
        const int slo = side(lo), shi = side(hi);
        if (slo == 0 || shi == 0 || slo == shi) continue;
        for (int it = 0; it < 60; ++it) {
          const double mid = (lo + hi) / 2;
          (side(mid) == slo ? lo : hi) = mid;
        }
        cuts.push_back((lo + hi) / 2);
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double l = arc_length(piece, cuts[i], cuts[i + 1]);
        switch (side((cuts[i] + cuts[i + 1]) / 2)) {
          case 1: above += l; break;
          case -1: below += l; break;
          default: on += l; break;
        }
      }
    }
  }
  const double total = above + below + on;
  if (!(total > 0)) throw Error(ErrorCode::metric_undefined, "no visible length");
  return {100.0 * (above + on / 2) / total, 100.0 * (below + on / 2) / total};
}

double circularity(const Glyph& g, int samples_per_segment) {
  const Polyline pts = glyph_samples(g, samples_per_segment);
  const double hull = hull_area(g, samples_per_segment, pts);
  return hull / min_enclosing_circle(pts).area();
}

double rectangularity(const Glyph& g, int samples_per_segment) {
  const Polyline pts = glyph_samples(g, samples_per_segment);
  const double hull = hull_area(g, samples_per_segment, pts);
  return hull / bounding_box(g).area();
}

std::pair<double, int> complexity_factors(const SegmentationResult& seg) {
  const auto vis = visible(seg);
  double sum = 0;
  for (std::size_t i = 0; i + 1 < vis.size(); ++i) sum += turn_between(vis[i]->net_angle, vis[i + 1]->net_angle);

  // One polyline per pen stroke so that junctions along the writing path are
  // consecutive vertices rather than crossings.
  std::vector<Polyline> lines;
  int current = -2;
  for (const auto* s : vis) {
    if (s->pen_stroke != current) {
      lines.emplace_back();
      current = s->pen_stroke;
    }
    const Polyline part = stroke_polyline(*s);
    lines.back().insert(lines.back().end(), part.begin() + (lines.back().empty() ? 0 : 1), part.end());
  }
  return {sum, count_crossings(lines)};
}

StrokeCounts stroke_counts(const SegmentationResult& seg) {
  StrokeCounts c;
  c.primitive = static_cast<int>(seg.strokes.size());
  c.pen_strokes = 0;
  int last = -1;
  for (const auto& s : seg.strokes) {
    if (!s.visible) continue;
    if (s.pen_stroke != last) ++c.pen_strokes;
    last = s.pen_stroke;
    (s.updown == UpDown::down ? c.downstrokes : c.upstrokes)++;
  }
  c.disjointed = c.pen_strokes + count_kind(seg, LandmarkKind::sharp_junction);
  c.retraces = static_cast<int>(seg.retraces.size());
  return c;
}

std::pair<double, std::vector<double>> stroke_length_stats(const SegmentationResult& seg) {
  std::vector<double> lengths;
  for (const auto* s : visible(seg)) lengths.push_back(s->length);
  if (lengths.empty()) throw Error(ErrorCode::metric_undefined, "no visible strokes");
  return {std::accumulate(lengths.begin(), lengths.end(), 0.0) / lengths.size(), lengths};
}

double changeability(const SegmentationResult& seg) {
  double up = 0, down = 0;
  for (const auto* s : visible(seg)) (s->updown == UpDown::down ? down : up) += s->length;
  if (!(down > 0)) throw Error(ErrorCode::metric_undefined, "no down-stroke length");
  return up / down;
}

std::pair<int, int> disfluency(const SegmentationResult& seg) {
  const int ce = count_kind(seg, LandmarkKind::curvature_extremum);
  const int sj = count_kind(seg, LandmarkKind::sharp_junction);
  const int ups = count_kind(seg, LandmarkKind::pen_up);
  return {ce + sj + ups, sj + ups};
}

double entropy(const std::vector<DirectionCode>& codes) {
  if (codes.empty()) throw Error(ErrorCode::metric_undefined, "entropy of an empty stroke sequence");
  std::array<int, 8> counts{};
  for (auto c : codes) ++counts[static_cast<int>(c)];
  double h = 0;
  for (int c : counts) {
    if (c == 0) continue;
    const double p = double(c) / codes.size();
    h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

double entropy(const SegmentationResult& seg) { return entropy(seg.stroke_inventory_key); }

AngleMetrics angle_metrics(const Glyph& g, const Trajectory& t, const SegmentationResult& seg) {
  AngleMetrics a;
  const auto vis = visible(seg);
  if (vis.empty()) {
    a.major_angle_deg = Metric<double>::null("no visible strokes");
    a.initial_angle_deg = Metric<double>::null("no visible strokes");
  } else {
    const PrimitiveStroke* major = vis.front();
    for (const auto* s : vis)
      if (s->length > major->length) major = s;
    a.major_angle_deg = Metric<double>::of(major->net_angle);
    a.initial_angle_deg = Metric<double>::of(vis.front()->net_angle);
  }
  const Point v = pen_stroke_end(g, t.pen_strokes.back()) - pen_stroke_start(g, t.pen_strokes.front());
  if (v.norm() > coincidence_tolerance(g)) {
    a.divergence_angle_deg = Metric<double>::of(angle_deg(v));
  } else {
    a.divergence_angle_deg = Metric<double>::null("first pen-down and last pen-up coincide");
  }
  for (const auto& s : seg.strokes)
    if (!s.visible && s.length > 0) a.pen_drag_angles_deg.push_back(s.net_angle);
  for (std::size_t i = 0; i + 1 < vis.size(); ++i) {
    const double turn = wrap_deg(vis[i + 1]->net_angle - vis[i]->net_angle);
    ++a.inter_stroke_histogram[static_cast<int>(std::floor((turn + 22.5) / 45.0)) % 8];
  }
  return a;
}

double pen_drag_distance(const SegmentationResult& seg) {
  double total = 0;
  for (const auto& s : seg.strokes)
    if (!s.visible) total += s.length;
  return total;
}

std::pair<int, int> cognitive_counts(const Glyph& g, const Trajectory& t, const SegmentationResult& seg,
                                     double rdp_epsilon) {
  if (!(rdp_epsilon > 0)) throw Error(ErrorCode::invalid_input, "rdp epsilon must be > 0");
  const int landmarks = static_cast<int>(seg.landmarks.size()) + 2;
  int rdp = 0;
  for (const auto& ps : t.pen_strokes) {
    Polyline path;
    for (const auto& p : ps.path) {
      const Polyline part = sample(directed(g, p), 128);
      path.insert(path.end(), part.begin() + (path.empty() ? 0 : 1), part.end());
    }
    rdp += static_cast<int>(rdp_simplify(path, rdp_epsilon).size());
  }
  return {landmarks, rdp};
}

Eigen::MatrixX2d distinctivity_profile(const Glyph& g, const Trajectory* t, DistinctivityMode mode, int resample) {
  if (resample < 8) throw Error(ErrorCode::invalid_input, "resample must be >= 8");
  const Glyph n = normalize(g, NormalizeMode::unit_diagonal);
  DensePath path;
  if (mode == DistinctivityMode::trajectory) {
    if (!t) throw Error(ErrorCode::invalid_input, "trajectory mode needs a trajectory for glyph '" + g.id + "'");
    require_valid(g, *t);
    for (const auto& ps : t->pen_strokes)
      for (const auto& p : ps.path) append_curve(path, directed(n, p), 256);
  } else {
    for (const auto& s : n.segments) append_curve(path, s, 256);
  }
  const double total = path.arc.back();
  if (!(total > 0)) throw Error(ErrorCode::degenerate_glyph, "glyph '" + g.id + "' has no length");
  Eigen::MatrixX2d out(resample, 2);
  std::size_t j = 0;
  for (int i = 0; i < resample; ++i) {
    const double target = total * i / (resample - 1);
    while (j + 2 < path.arc.size() && path.arc[j + 1] < target) ++j;
    const double span = path.arc[j + 1] - path.arc[j];
    const double f = span > 0 ? std::clamp((target - path.arc[j]) / span, 0.0, 1.0) : 0.0;
    out.row(i) = (path.points[j] + f * (path.points[j + 1] - path.points[j])).transpose();
  }
  return out;
}

double distinctivity(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b) {
  const auto r = dtw(a, b);
  return r.cost / static_cast<double>(r.path_length);
}

double distinctivity(const Glyph& a, const Trajectory* ta, const Glyph& b, const Trajectory* tb,
                     DistinctivityMode mode, int resample) {
  return distinctivity(distinctivity_profile(a, ta, mode, resample), distinctivity_profile(b, tb, mode, resample));
}

namespace {

template <typename F>
Metric<double> guarded(F&& f) {
  try {
    return Metric<double>::of(f());
  } catch (const Error& e) {
    return Metric<double>::null(e.what());
  }
}

}  // namespace

MetricRecord compute_all(const Glyph& g, const Trajectory& t, const SegmentationResult& seg,
                         const MetricOptions& options) {
  require_valid(g, t);
  int visible_pen_strokes = 0, last = -1;
  for (const auto& s : seg.strokes) {
    if (s.visible && s.pen_stroke != last) ++visible_pen_strokes;
    if (s.visible) last = s.pen_stroke;
    if (s.visible && (s.pen_stroke < 0 || s.pen_stroke >= static_cast<int>(t.pen_strokes.size())))
      throw Error(ErrorCode::invalid_input, "segmentation does not belong to this trajectory");
  }
  if (visible_pen_strokes != static_cast<int>(t.pen_strokes.size()))
    throw Error(ErrorCode::invalid_input, "segmentation does not belong to this trajectory");

  MetricRecord r;
  r.glyph_id = g.id;
  const double len = length(seg);
  const double div = divergence(g, t);
  r.length = Metric<double>::of(len);
  r.divergence = Metric<double>::of(div);
  r.size = guarded([&] { return size(g); });
  r.lb_index = guarded([&] { return lb_index(g); });
  r.avg_curvature = guarded([&] { return avg_curvature(seg, options.curvature_samples); });
  r.compactness = r.size.has_value() ? guarded([&] { return compactness(len, *r.size); }) : Metric<double>::null(r.size.reason);
  r.openness = guarded([&] { return openness(div, len); });

  const std::optional<double> baseline = g.baseline_y ? g.baseline_y : options.default_baseline_y;
  try {
    const auto [asc, desc] = ascendancy_descendance(seg, baseline);
    r.ascendancy_pct = Metric<double>::of(asc);
    r.descendance_pct = Metric<double>::of(desc);
  } catch (const Error& e) {
    r.ascendancy_pct = Metric<double>::null(e.what());
    r.descendance_pct = Metric<double>::null(e.what());
  }
  r.circularity = guarded([&] { return circularity(g, options.curvature_samples); });
  r.rectangularity = guarded([&] { return rectangularity(g, options.curvature_samples); });
  std::tie(r.inter_stroke_angle_sum_deg, r.crossings) = complexity_factors(seg);
  r.counts = stroke_counts(seg);
  try {
    auto [avg, list] = stroke_length_stats(seg);
    r.avg_stroke_length = Metric<double>::of(avg);
    r.stroke_length_list = std::move(list);
  } catch (const Error& e) {
    r.avg_stroke_length = Metric<double>::null(e.what());
  }
  r.changeability = guarded([&] { return changeability(seg); });
  std::tie(r.disfluency, r.disjoint_count) = disfluency(seg);
  r.entropy_nats = guarded([&] { return entropy(seg); });
  r.pen_drag_distance = pen_drag_distance(seg);
  std::tie(r.landmark_count, r.rdp_point_count) =
      cognitive_counts(g, t, seg, options.rdp_epsilon_fraction * bounding_box(g).diagonal());
  r.angles = angle_metrics(g, t, seg);
  return r;
}

std::map<std::string, Metric<double>> scalar_fields(const MetricRecord& r) {
  const auto num = [](double v) { return Metric<double>::of(v); };
  return {
      {"ascendancy_pct", r.ascendancy_pct},
      {"avg_curvature", r.avg_curvature},
      {"avg_stroke_length", r.avg_stroke_length},
      {"changeability", r.changeability},
      {"circularity", r.circularity},
      {"compactness", r.compactness},
      {"counts_disjointed", num(r.counts.disjointed)},
      {"counts_downstrokes", num(r.counts.downstrokes)},
      {"counts_pen_strokes", num(r.counts.pen_strokes)},
      {"counts_primitive", num(r.counts.primitive)},
      {"counts_retraces", num(r.counts.retraces)},
      {"counts_upstrokes", num(r.counts.upstrokes)},
      {"crossings", num(r.crossings)},
      {"descendance_pct", r.descendance_pct},
      {"disfluency", num(r.disfluency)},
      {"disjoint_count", num(r.disjoint_count)},
      {"divergence", r.divergence},
      {"divergence_angle_deg", r.angles.divergence_angle_deg},
      {"entropy_nats", r.entropy_nats},
      {"initial_angle_deg", r.angles.initial_angle_deg},
      {"inter_stroke_angle_sum_deg", num(r.inter_stroke_angle_sum_deg)},
      {"landmark_count", num(r.landmark_count)},
      {"lb_index", r.lb_index},
      {"length", r.length},
      {"major_angle_deg", r.angles.major_angle_deg},
      {"openness", r.openness},
      {"pen_drag_distance", num(r.pen_drag_distance)},
      {"rdp_point_count", num(r.rdp_point_count)},
      {"rectangularity", r.rectangularity},
      {"size", r.size},
  };
}

std::map<std::string, std::vector<double>> list_fields(const MetricRecord& r) {
  return {
      {"inter_stroke_histogram",
       std::vector<double>(r.angles.inter_stroke_histogram.begin(), r.angles.inter_stroke_histogram.end())},
      {"pen_drag_angles_deg", r.angles.pen_drag_angles_deg},
      {"stroke_length_list", r.stroke_length_list},
  };
}

const std::vector<std::string>& scale_invariant_fields() {
  static const std::vector<std::string> names = {
      "ascendancy_pct",    "changeability",      "circularity",     "counts_disjointed", "counts_downstrokes",
      "counts_pen_strokes", "counts_primitive",  "counts_retraces", "counts_upstrokes",  "crossings",
      "descendance_pct",   "disfluency",         "disjoint_count",  "divergence_angle_deg", "entropy_nats",
      "initial_angle_deg", "inter_stroke_angle_sum_deg", "landmark_count", "lb_index", "major_angle_deg",
      "openness",          "rdp_point_count",    "rectangularity"};
  return names;
}

}  // namespace glyphometrics
