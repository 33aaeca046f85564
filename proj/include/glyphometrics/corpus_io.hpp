#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "glyphometrics/metrics.hpp"
#include "glyphometrics/reconstruction.hpp"
#include "glyphometrics/script_analysis.hpp"

namespace glyphometrics {

inline constexpr std::string_view kFormatVersion = "1.0";

/// Everything persisted for one script: the corpus, the chosen trajectory per
/// glyph, the reconstruction candidates it was chosen from, and the edited
/// landmark list per glyph (absent means automatic detection).
struct CorpusDocument {
  std::string format_version{kFormatVersion};
  ScriptCorpus corpus;
  std::map<std::string, Trajectory> trajectories;
  std::map<std::string, std::vector<CandidateTrajectory>> candidates;
  std::map<std::string, std::vector<LandmarkPoint>> landmarks;
};

struct LoadOptions {
  bool flip_y = false;  // source uses screen coordinates (y down)
};

/// Duplicate or empty glyph ids and per-glyph entries for unknown glyphs.
void check_integrity(const CorpusDocument& doc);

CorpusDocument parse_corpus(std::string_view text, const LoadOptions& options = {});
CorpusDocument load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});
/// Sorted keys, floats rounded to 1e-9, two-space indent, trailing newline.
std::string canonical_string(const CorpusDocument& doc);
void save_corpus(const CorpusDocument& doc, const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Rounds to 1e-9 and turns -0 into 0; the canonical float form.
double canonical_float(double x);

// ---------------------------------------------------------------------------
// JSON forms shared by the corpus file and the service.

namespace jsonio {

using nlohmann::json;

json to_json(const Spline& s);
json to_json(const Glyph& g);
json to_json(const Trajectory& t);  // without glyph id; the owner keys it
json to_json(const LandmarkPoint& l);
json to_json(const CandidateTrajectory& c);
json to_json(const ScoreBreakdown& b);
json to_json(const SegmentationResult& seg);
json to_json(const MetricRecord& r);
json to_json(const ScriptMetrics& m);
json to_json(const SimilarityMatrix& m);
json to_json(const ParallelCoordinates& p);
json to_json(const BigramModel& m);
json to_json(const DirectionSummary& d);
json to_json(const Histogram& h);
json to_json(const CorpusDocument& doc);

// Readers throw parse-error naming the offending element by JSON pointer.
Glyph glyph_from_json(const json& j, const std::string& where = "");
Trajectory trajectory_from_json(const json& j, const std::string& glyph_id, const std::string& where = "");
LandmarkPoint landmark_from_json(const json& j, const std::string& where = "");
Point point_from_json(const json& j, const std::string& where = "");
ReconstructionWeights weights_from_json(const json& j, const std::string& where = "");
CorpusDocument document_from_json(const json& j);

/// Every number rounded to the canonical float form, recursively.
json canonicalized(json j);

}  // namespace jsonio

// ---------------------------------------------------------------------------
// CSV exports: header row, nulls as empty cells, floats with 6 significant
// digits, list values joined with ';'.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double x);
std::string to_csv(const Table& t);

/// glyph_id, then every scalar and list field in alphabetical order.
Table records_table(const std::vector<MetricRecord>& records);
/// field, mean, weighted_mean per scalar field.
Table script_metrics_table(const ScriptMetrics& m);
/// Square matrix with a glyph id header row and column; flagged cells empty.
Table similarity_table(const SimilarityMatrix& m);
/// script_id, glyph_id, then per field its normalized value and `<field>_raw`.
Table parallel_coordinates_table(const ParallelCoordinates& p);
/// bin_lo, bin_hi, count.
Table histogram_table(const Histogram& h);

void write_csv(const Table& t, const std::filesystem::path& path);

}  // namespace glyphometrics
