#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glyphometrics/corpus_io.hpp"

namespace glyphometrics {

struct AnalysisOptions {
  bool normalize = false;  // unit-diagonal glyphs before measuring
  ReconstructionConfig reconstruction;
  SegmentationConfig segmentation;
  MetricOptions metrics;
  int threads = 1;
};

/// One glyph through the pipeline. Stored trajectories and landmark lists are
/// used as they are; a missing trajectory is reconstructed (rank 0).
struct GlyphAnalysis {
  std::string glyph_id;
  std::optional<Trajectory> trajectory;
  bool reconstructed = false;
  std::optional<SegmentationResult> segmentation;
  std::optional<MetricRecord> record;
  std::string error;  // set when any stage failed; earlier stages may still be present
};

/// The glyph as measured: corpus baseline filled in, normalized if requested.
Glyph measured_glyph(const ScriptCorpus& corpus, const Glyph& g, bool normalize);

GlyphAnalysis analyze_glyph(const CorpusDocument& doc, const Glyph& g, const AnalysisOptions& options = {});
/// In corpus order; glyphs run in parallel up to options.threads.
std::vector<GlyphAnalysis> analyze(const CorpusDocument& doc, const AnalysisOptions& options = {});

/// Everything reported for one script.
struct ScriptReport {
  ScriptMetrics metrics;
  std::optional<BigramModel> bigram;                // absent when no glyph has a visible stroke
  std::optional<BigramModel> bigram_smoothed;
  std::vector<double> glyph_entropies;              // per analysed glyph with a defined entropy
  std::optional<SimilarityMatrix> trajectory_similarity;  // absent for fewer than 2 glyphs
  std::optional<SimilarityMatrix> static_similarity;
  DirectionSummary directions;
  std::vector<std::string> warnings;
};

/// Aggregates the successful analyses of a document. Failed glyphs are listed
/// as warnings and left out.
ScriptReport script_report(const CorpusDocument& doc, const std::vector<GlyphAnalysis>& analyses,
                           const AnalysisOptions& options = {}, Weighting weighting = Weighting::uniform);

/// GLYPHOMETRICS_THREADS if set (at least 1), else the hardware concurrency.
int default_threads();

}  // namespace glyphometrics
