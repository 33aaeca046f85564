#pragma once

#include <utility>
#include <vector>

#include "glyphometrics/glyph.hpp"

namespace glyphometrics {

struct SegmentationConfig {
  int curvature_samples = 128;            // per pass
  double curvature_prominence = 0.05;     // fraction of the glyph's max |curvature|
  double sharp_junction_threshold_deg = 60.0;
  double retrace_hausdorff_tol = 0.03;    // fraction of the bbox diagonal
};

void validate(const SegmentationConfig& cfg);

/// Indices into SegmentationResult::strokes of a stroke and the stroke that retraces it.
struct RetracePair {
  int first = 0;
  int second = 0;

  bool operator==(const RetracePair&) const = default;
};

struct SegmentationResult {
  std::vector<LandmarkPoint> landmarks;               // in writing order
  std::vector<PrimitiveStroke> strokes;               // writing order, pen-drags interleaved
  std::vector<DirectionCode> stroke_inventory_key;    // codes of the visible strokes
  std::vector<RetracePair> retraces;
};

/// Curvature extrema, sharp junctions, retrace turn-backs and intermediate pen
/// events, in writing order, all tagged automatic.
std::vector<LandmarkPoint> detect_landmarks(const Glyph& g, const Trajectory& t, const SegmentationConfig& cfg = {});

/// Cuts the trajectory at every landmark (pen events separate pen strokes) and
/// classifies the pieces.
SegmentationResult segment_strokes(const Glyph& g, const Trajectory& t, std::vector<LandmarkPoint> landmarks,
                                   const SegmentationConfig& cfg = {});

/// detect_landmarks followed by segment_strokes.
SegmentationResult segment(const Glyph& g, const Trajectory& t, const SegmentationConfig& cfg = {});

/// Adds manual landmarks (snapped to the nearest trajectory position) and
/// removes landmarks by index, then re-segments. Pen events cannot be removed.
SegmentationResult override_landmarks(const Glyph& g, const Trajectory& t, const SegmentationResult& current,
                                      const std::vector<Point>& add, const std::vector<int>& remove,
                                      const SegmentationConfig& cfg = {},
                                      LandmarkKind added_kind = LandmarkKind::curvature_extremum);

/// Nearest position on the trajectory (earliest in writing order on ties) and its distance.
std::pair<TrajectoryPosition, double> locate(const Glyph& g, const Trajectory& t, const Point& p);

DirectionCode quantize_angle(double degrees);
UpDown classify_angle(double degrees);
DirectionCode quantize_direction(const PrimitiveStroke& s);
UpDown classify_updown(const PrimitiveStroke& s);

/// Consecutive visible strokes within `tol` (absolute, symmetric Hausdorff) of
/// each other and heading in opposite net directions.
std::vector<RetracePair> detect_retraces(const std::vector<PrimitiveStroke>& strokes, double tol);

/// Dense polyline through a stroke's pieces.
Polyline stroke_polyline(const PrimitiveStroke& s, int samples_per_piece = 32);

}  // namespace glyphometrics
