#pragma once

#include <Eigen/Core>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glyphometrics/metrics.hpp"

namespace glyphometrics {

struct Histogram {
  std::vector<double> edges;  // counts.size() + 1 ascending edges; the last bin is closed
  std::vector<int> counts;
};

/// Freedman-Diaconis bin width, at least `min_bins` and at most `max_bins` bins.
Histogram freedman_diaconis(std::vector<double> values, int min_bins = 5, int max_bins = 256);
/// `bins` equal bins over [lo, hi]; values outside are clamped into the end bins.
Histogram fixed_histogram(const std::vector<double>& values, double lo, double hi, int bins);

enum class Weighting { uniform, frequency };

struct ScriptMetrics {
  std::string script_id;
  std::map<std::string, MetricRecord> per_glyph;
  std::map<std::string, Metric<double>> means;           // per scalar field, requested weighting
  std::map<std::string, Metric<double>> weighted_means;  // usage-frequency weighted
  std::map<std::string, Histogram> histograms;           // per scalar field, plus stroke_length_list
};

/// Fields whose mean is circular (angles in degrees).
bool is_angle_field(const std::string& name);

/// Script means (over non-null values only) and per-field distributions.
/// Records are matched to glyphs by id; usage_frequency weights default to 1.
ScriptMetrics aggregate(const ScriptCorpus& corpus, const std::vector<MetricRecord>& records,
                        Weighting weighting = Weighting::uniform);

enum class Smoothing { none, add_one };

struct BigramModel {
  Smoothing smoothing = Smoothing::none;
  std::array<double, 8> unigram{};                    // indexed by DirectionCode
  std::array<std::array<double, 8>, 8> joint{};       // p(a, b)
  std::array<std::array<double, 8>, 8> conditional{}; // p(b | a); zero rows for unseen a without smoothing
  std::array<bool, 8> row_defined{};
  double unigram_entropy_nats = 0;
  double conditional_entropy_nats = 0;
  int symbols = 0;
  int pairs = 0;
};

/// Direction-code unigram and bigram statistics. Each glyph's sequence is
/// read cyclically (the last code pairs with the first), so pairs never cross
/// glyphs and the pair marginals equal the unigram distribution.
BigramModel build_bigram_model(const std::vector<std::vector<DirectionCode>>& sequences,
                               Smoothing smoothing = Smoothing::none);

struct SimilarityMatrix {
  std::vector<std::string> glyph_ids;
  Eigen::MatrixXd values;                    // NaN in flagged rows and columns
  std::map<std::string, std::string> flagged;  // glyph id -> reason
};

/// Pairwise distinctivity; the upper triangle is computed and mirrored.
/// Glyphs that cannot be profiled (degenerate, or no trajectory in trajectory
/// mode) are flagged instead of failing the matrix.
SimilarityMatrix similarity_matrix(const ScriptCorpus& corpus, const std::map<std::string, Trajectory>& trajectories,
                                   DistinctivityMode mode, int resample = 64, int threads = 1);

struct ParallelCoordinates {
  struct Row {
    std::string script_id;
    std::optional<std::string> glyph_id;  // set for per-glyph rows
    std::vector<std::optional<double>> raw;
    std::vector<std::optional<double>> normalized;
  };
  std::vector<std::string> fields;
  std::vector<std::pair<double, double>> bounds;  // (min, max) per field
  std::vector<Row> rows;
  std::vector<std::string> warnings;
};

/// Script means (and optionally every glyph) min-max normalized per field
/// across all rows; a field with zero range normalizes to 0.5.
ParallelCoordinates export_parallel_coordinates(const std::vector<ScriptMetrics>& scripts,
                                                const std::vector<std::string>& fields,
                                                bool include_glyph_rows = false);

struct DirectionSummary {
  std::array<int, 8> major{};    // indexed by DirectionCode
  std::array<int, 8> initial{};
  std::optional<DirectionCode> modal_major;
  std::optional<DirectionCode> modal_initial;
  int glyphs = 0;
  std::vector<std::string> warnings;
};

/// Major and initial stroke directions binned to codes; ties for the mode go
/// to the earlier code in N, NE, E, SE, S, SW, W, NW order.
DirectionSummary direction_summary(const std::vector<MetricRecord>& records);

}  // namespace glyphometrics
