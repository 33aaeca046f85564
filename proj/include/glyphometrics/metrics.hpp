#pragma once

#include <Eigen/Core>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glyphometrics/glyph.hpp"
#include "glyphometrics/segmentation.hpp"

namespace glyphometrics {

/// A value, or the reason there is none. Metrics never default silently.
template <typename T>
struct Metric {
  std::optional<T> value;
  std::string reason;

  static Metric of(T v) { return {std::move(v), {}}; }
  static Metric null(std::string why) { return {std::nullopt, std::move(why)}; }
  bool has_value() const { return value.has_value(); }
  const T& operator*() const { return *value; }
};

struct StrokeCounts {
  int primitive = 0;
  int pen_strokes = 0;
  int disjointed = 0;
  int retraces = 0;
  int upstrokes = 0;
  int downstrokes = 0;
};

struct AngleMetrics {
  Metric<double> major_angle_deg;
  Metric<double> initial_angle_deg;
  Metric<double> divergence_angle_deg;
  std::vector<double> pen_drag_angles_deg;
  std::array<int, 8> inter_stroke_histogram{};  // bin i: counterclockwise turns within 45*i +- 22.5 degrees
};

struct MetricRecord {
  std::string glyph_id;
  Metric<double> length, divergence, size, lb_index, avg_curvature, compactness, openness;
  Metric<double> ascendancy_pct, descendance_pct, circularity, rectangularity;
  double inter_stroke_angle_sum_deg = 0;
  int crossings = 0;
  StrokeCounts counts;
  Metric<double> avg_stroke_length;
  std::vector<double> stroke_length_list;
  Metric<double> changeability;
  int disfluency = 0;
  int disjoint_count = 0;
  Metric<double> entropy_nats;
  double pen_drag_distance = 0;
  int landmark_count = 0;
  int rdp_point_count = 0;
  AngleMetrics angles;
};

/// Scalar view of a record: every scalar field by its flat name, sorted by name.
/// List-valued fields are excluded; see list_fields.
std::map<std::string, Metric<double>> scalar_fields(const MetricRecord& r);
std::map<std::string, std::vector<double>> list_fields(const MetricRecord& r);

/// Flat names of scalar fields invariant under uniform scaling.
const std::vector<std::string>& scale_invariant_fields();

// ---------------------------------------------------------------------------
// Individual metrics. These throw on undefined inputs; compute_all turns the
// errors into null-with-reason fields.

double length(const SegmentationResult& seg);
double divergence(const Glyph& g, const Trajectory& t);
double size(const Glyph& g);
double lb_index(const Glyph& g);
double avg_curvature(const SegmentationResult& seg, int samples_per_piece = 128);
double compactness(double length, double size);
double openness(double divergence, double length);
std::pair<double, double> ascendancy_descendance(const SegmentationResult& seg, std::optional<double> baseline_y);
double circularity(const Glyph& g, int samples_per_segment = 128);
double rectangularity(const Glyph& g, int samples_per_segment = 128);
std::pair<double, int> complexity_factors(const SegmentationResult& seg);
StrokeCounts stroke_counts(const SegmentationResult& seg);
std::pair<double, std::vector<double>> stroke_length_stats(const SegmentationResult& seg);
double changeability(const SegmentationResult& seg);
std::pair<int, int> disfluency(const SegmentationResult& seg);
double entropy(const std::vector<DirectionCode>& codes);
double entropy(const SegmentationResult& seg);
AngleMetrics angle_metrics(const Glyph& g, const Trajectory& t, const SegmentationResult& seg);
double pen_drag_distance(const SegmentationResult& seg);
std::pair<int, int> cognitive_counts(const Glyph& g, const Trajectory& t, const SegmentationResult& seg,
                                     double rdp_epsilon);

enum class DistinctivityMode { trajectory, static_shape };

/// Normalized glyph path resampled to `resample` arc-length-uniform points
/// (rows). Trajectory mode follows writing order, static mode segment order.
Eigen::MatrixX2d distinctivity_profile(const Glyph& g, const Trajectory* t, DistinctivityMode mode,
                                       int resample = 64);

/// DTW cost between two profiles divided by the warping-path length.
double distinctivity(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b);
double distinctivity(const Glyph& a, const Trajectory* ta, const Glyph& b, const Trajectory* tb,
                     DistinctivityMode mode, int resample = 64);

struct MetricOptions {
  double rdp_epsilon_fraction = 0.02;   // of the bbox diagonal
  int curvature_samples = 128;
  std::optional<double> default_baseline_y;  // used when the glyph has none
};

MetricRecord compute_all(const Glyph& g, const Trajectory& t, const SegmentationResult& seg,
                         const MetricOptions& options = {});

}  // namespace glyphometrics
