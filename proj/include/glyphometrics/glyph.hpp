#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glyphometrics/geometry.hpp"

namespace glyphometrics {

/// One visual instance of a character: ordered B-spline segments plus metadata.
struct Glyph {
  std::string id;
  std::string script_id;
  std::vector<Spline> segments;
  std::optional<double> baseline_y;
  std::optional<std::string> label;
  std::optional<double> usage_frequency;  // absent means weight 1
};

struct ScriptCorpus {
  std::string id;
  std::string name;
  std::optional<double> baseline_y;  // default for glyphs without their own
  std::vector<Glyph> glyphs;

  const Glyph* find(std::string_view glyph_id) const;
  Glyph* find(std::string_view glyph_id);
};

/// A directed traversal of one glyph segment.
struct Pass {
  int segment = 0;
  bool reversed = false;
  bool retrace = false;  // second, opposite-direction pass right after the first

  bool operator==(const Pass&) const = default;
  auto operator<=>(const Pass&) const = default;
};

/// Pen-down to pen-up: passes connected end to end.
struct PenStroke {
  std::vector<Pass> path;

  bool operator==(const PenStroke&) const = default;
};

enum class Provenance { reconstructed, recorded, manual };

struct Trajectory {
  std::string glyph_id;
  std::vector<PenStroke> pen_strokes;
  Provenance provenance = Provenance::reconstructed;

  bool operator==(const Trajectory&) const = default;
};

enum class LandmarkKind { curvature_extremum, sharp_junction, pen_up, pen_down, retrace_turn };
enum class LandmarkSource { automatic, manual };

/// Where along a trajectory a point lies: pen stroke, pass within it, and the
/// parameter in [0, 1] along the pass in its writing direction.
struct TrajectoryPosition {
  int pen_stroke = 0;
  int pass = 0;
  double t = 0;

  auto operator<=>(const TrajectoryPosition&) const = default;
};

struct LandmarkPoint {
  Point location = Point::Zero();
  LandmarkKind kind = LandmarkKind::curvature_extremum;
  LandmarkSource source = LandmarkSource::automatic;
  TrajectoryPosition position;
};

enum class DirectionCode { N, NE, E, SE, S, SW, W, NW };
enum class UpDown { up, down };

inline constexpr std::array<DirectionCode, 8> kDirectionCodes = {
    DirectionCode::N, DirectionCode::NE, DirectionCode::E, DirectionCode::SE,
    DirectionCode::S, DirectionCode::SW, DirectionCode::W, DirectionCode::NW};

/// One ballistic stroke between landmarks. A visible stroke is the chain of
/// exact sub-curves it covers (one piece per pass it touches); a pen-drag is a
/// single invisible straight piece.
struct PrimitiveStroke {
  std::vector<Spline> pieces;
  bool visible = true;
  double net_angle = 0;
  double length = 0;
  DirectionCode direction = DirectionCode::E;
  UpDown updown = UpDown::up;
  int index = 0;
  int pen_stroke = -1;  // owning pen stroke; -1 for pen-drags
  Point start = Point::Zero();
  Point end = Point::Zero();
};

std::string_view to_string(Provenance p);
std::string_view to_string(LandmarkKind k);
std::string_view to_string(LandmarkSource s);
std::string_view to_string(DirectionCode c);
std::string_view to_string(UpDown u);
Provenance provenance_from_string(std::string_view s);
LandmarkKind landmark_kind_from_string(std::string_view s);
LandmarkSource landmark_source_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Glyph operations

/// Invariant violations; empty iff the glyph is valid.
std::vector<std::string> validate(const Glyph& g);

enum class NormalizeMode { none, unit_diagonal };

Glyph normalize(const Glyph& g, NormalizeMode mode);

/// Uniform-parameter samples per segment, in storage order.
std::vector<Polyline> to_polyline(const Glyph& g, int samples_per_segment);

/// Exact bounds over all segments.
Rect bounding_box(const Glyph& g);

/// Points closer than this are the same point (1e-6 of the bbox diagonal).
double coincidence_tolerance(const Glyph& g);

/// Glyph mapped through x -> A x + b. The baseline survives only maps that keep
/// horizontal lines horizontal.
Glyph transformed(const Glyph& g, const Eigen::Matrix2d& linear, const Point& offset);
Glyph scaled(const Glyph& g, double s);
Glyph rotated(const Glyph& g, double degrees);

// ---------------------------------------------------------------------------
// Trajectory operations

/// The pass's segment oriented in writing direction.
Spline directed(const Glyph& g, const Pass& p);

Point pen_stroke_start(const Glyph& g, const PenStroke& s);
Point pen_stroke_end(const Glyph& g, const PenStroke& s);

/// Coverage, connectivity and retrace-placement violations; empty iff valid.
std::vector<std::string> validate(const Glyph& g, const Trajectory& t);

/// Throws invalid-input listing the violations when the trajectory is not valid.
void require_valid(const Glyph& g, const Trajectory& t);

int pen_up_count(const Trajectory& t);

}  // namespace glyphometrics
