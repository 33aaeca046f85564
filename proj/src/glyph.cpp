#include "glyphometrics/glyph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace glyphometrics {

const Glyph* ScriptCorpus::find(std::string_view glyph_id) const {
  for (const auto& g : glyphs)
    if (g.id == glyph_id) return &g;
  return nullptr;
}

Glyph* ScriptCorpus::find(std::string_view glyph_id) {
  for (auto& g : glyphs)
    if (g.id == glyph_id) return &g;
  return nullptr;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::reconstructed: return "reconstructed";
    case Provenance::recorded: return "recorded";
    case Provenance::manual: return "manual";
  }
  return "reconstructed";
}

std::string_view to_string(LandmarkKind k) {
  switch (k) {
    case LandmarkKind::curvature_extremum: return "curvature_extremum";
    case LandmarkKind::sharp_junction: return "sharp_junction";
    case LandmarkKind::pen_up: return "pen_up";
    case LandmarkKind::pen_down: return "pen_down";
    case LandmarkKind::retrace_turn: return "retrace_turn";
  }
  return "curvature_extremum";
}

std::string_view to_string(LandmarkSource s) {
  return s == LandmarkSource::manual ? "manual" : "auto";
}

std::string_view to_string(DirectionCode c) {
  static constexpr std::array<std::string_view, 8> names = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
  return names[static_cast<int>(c)];
}

std::string_view to_string(UpDown u) { return u == UpDown::down ? "down" : "up"; }

Provenance provenance_from_string(std::string_view s) {
  for (auto p : {Provenance::reconstructed, Provenance::recorded, Provenance::manual})
    if (to_string(p) == s) return p;
  throw Error(ErrorCode::invalid_input, "unknown provenance '" + std::string(s) + "'");
}

LandmarkKind landmark_kind_from_string(std::string_view s) {
  for (auto k : {LandmarkKind::curvature_extremum, LandmarkKind::sharp_junction, LandmarkKind::pen_up,
                 LandmarkKind::pen_down, LandmarkKind::retrace_turn})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::invalid_input, "unknown landmark kind '" + std::string(s) + "'");
}

LandmarkSource landmark_source_from_string(std::string_view s) {
  if (s == "auto") return LandmarkSource::automatic;
  if (s == "manual") return LandmarkSource::manual;
  throw Error(ErrorCode::invalid_input, "unknown landmark source '" + std::string(s) + "'");
}

std::vector<std::string> validate(const Glyph& g) {
  std::vector<std::string> out;
  if (g.id.empty()) out.push_back("glyph id is empty");
  if (g.segments.empty()) out.push_back("glyph '" + g.id + "' has no segments");
  for (std::size_t i = 0; i < g.segments.size(); ++i) {
    const auto& c = g.segments[i].control_points();
    const std::string where = "segment " + std::to_string(i);
    if (!c.allFinite()) {
      out.push_back(where + ": non-finite control point");
      continue;
    }
    bool distinct = false;
    for (Eigen::Index j = 1; j < c.cols() && !distinct; ++j) distinct = c.col(j) != c.col(0);
    if (!distinct) out.push_back(where + ": fewer than 2 distinct control points");
  }
  if (g.baseline_y && !std::isfinite(*g.baseline_y)) out.push_back("baseline_y is not finite");
  if (g.usage_frequency && !(std::isfinite(*g.usage_frequency) && *g.usage_frequency >= 0))
    out.push_back("usage_frequency must be finite and >= 0");
  return out;
}

Rect bounding_box(const Glyph& g) {
  Rect r;
  for (const auto& s : g.segments) r.extend(bounding_box(s));
  return r;
}

double coincidence_tolerance(const Glyph& g) {
  const Rect box = bounding_box(g);
  return 1e-6 * (box.empty() ? 0.0 : box.diagonal());
}

Glyph transformed(const Glyph& g, const Eigen::Matrix2d& linear, const Point& offset) {
  Glyph out = g;
  for (auto& s : out.segments) s = s.transformed(linear, offset);
  if (g.baseline_y) {
    if (linear(1, 0) == 0 && linear(1, 1) != 0) {
      out.baseline_y = linear(1, 1) * *g.baseline_y + offset.y();
    } else {
      out.baseline_y.reset();
    }
  }
  return out;
}

Glyph scaled(const Glyph& g, double s) {
  return transformed(g, Eigen::Matrix2d::Identity() * s, Point::Zero());
}

Glyph rotated(const Glyph& g, double degrees) {
  const double r = degrees * std::numbers::pi / 180.0;
  Eigen::Matrix2d m;
  m << std::cos(r), -std::sin(r), std::sin(r), std::cos(r);
  return transformed(g, m, Point::Zero());
}

Glyph normalize(const Glyph& g, NormalizeMode mode) {
  if (mode == NormalizeMode::none) return g;
  const Rect box = bounding_box(g);
  const double diag = box.diagonal();
  if (box.empty() || !std::isfinite(diag) || diag <= 0)
    throw Error(ErrorCode::degenerate_glyph, "glyph '" + g.id + "' has a zero-diagonal bounding box");
  const double s = 1.0 / diag;
  return transformed(g, Eigen::Matrix2d::Identity() * s, -box.min * s);
}

std::vector<Polyline> to_polyline(const Glyph& g, int samples_per_segment) {
  if (samples_per_segment < 2) throw Error(ErrorCode::invalid_input, "samples_per_segment must be >= 2");
  std::vector<Polyline> out;
  out.reserve(g.segments.size());
  for (const auto& s : g.segments) out.push_back(sample(s, samples_per_segment));
  return out;
}

Spline directed(const Glyph& g, const Pass& p) {
  if (p.segment < 0 || p.segment >= static_cast<int>(g.segments.size()))
    throw Error(ErrorCode::invalid_input, "pass references missing segment " + std::to_string(p.segment));
  const Spline& s = g.segments[p.segment];
  return p.reversed ? s.reversed() : s;
}

namespace {

Point pass_point(const Glyph& g, const Pass& p, bool at_end) {
  const Spline& s = g.segments.at(p.segment);
  return (at_end != p.reversed) ? s.end() : s.start();
}

}  // namespace

Point pen_stroke_start(const Glyph& g, const PenStroke& s) {
  if (s.path.empty()) throw Error(ErrorCode::invalid_input, "empty pen stroke");
  return pass_point(g, s.path.front(), false);
}

Point pen_stroke_end(const Glyph& g, const PenStroke& s) {
  if (s.path.empty()) throw Error(ErrorCode::invalid_input, "empty pen stroke");
  return pass_point(g, s.path.back(), true);
}

std::vector<std::string> validate(const Glyph& g, const Trajectory& t) {
  std::vector<std::string> out;
  if (!t.glyph_id.empty() && t.glyph_id != g.id)
    out.push_back("trajectory belongs to '" + t.glyph_id + "', not '" + g.id + "'");
  if (t.pen_strokes.empty()) out.push_back("trajectory has no pen strokes");
  const int n = static_cast<int>(g.segments.size());
  std::vector<int> seen(n, 0);
  const double tol = std::max(coincidence_tolerance(g), 1e-12);
  for (std::size_t k = 0; k < t.pen_strokes.size(); ++k) {
    const auto& path = t.pen_strokes[k].path;
    const std::string where = "pen stroke " + std::to_string(k);
    if (path.empty()) {
      out.push_back(where + " is empty");
      continue;
    }
    bool indices_ok = true;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const Pass& p = path[i];
      if (p.segment < 0 || p.segment >= n) {
        out.push_back(where + " pass " + std::to_string(i) + " references missing segment " +
                      std::to_string(p.segment));
        indices_ok = false;
        continue;
      }
      if (p.retrace) {
        const bool ok = i > 0 && !path[i - 1].retrace && path[i - 1].segment == p.segment &&
                        path[i - 1].reversed != p.reversed;
        if (!ok) out.push_back(where + " pass " + std::to_string(i) + " retraces without a preceding first pass");
      } else {
        ++seen[p.segment];
      }
    }
    if (!indices_ok) continue;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const double gap = (pass_point(g, path[i], true) - pass_point(g, path[i + 1], false)).norm();
      if (gap > tol) {
        std::ostringstream msg;
        msg << where << " is disconnected between passes " << i << " and " << i + 1 << " (gap " << gap << ")";
        out.push_back(msg.str());
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    if (seen[s] != 1)
      out.push_back("segment " + std::to_string(s) + " is covered " + std::to_string(seen[s]) + " times");
  }
  return out;
}

void require_valid(const Glyph& g, const Trajectory& t) {
  const auto issues = validate(g, t);
  if (issues.empty()) return;
  std::string msg = "invalid trajectory for glyph '" + g.id + "'";
  for (const auto& i : issues) msg += "; " + i;
  throw Error(ErrorCode::invalid_input, msg);
}

int pen_up_count(const Trajectory& t) {
  return t.pen_strokes.empty() ? 0 : static_cast<int>(t.pen_strokes.size()) - 1;
}

}  // namespace glyphometrics
