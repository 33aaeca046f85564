#include "glyphometrics/pipeline.hpp"

#include <cstdlib>
#include <thread>

#include "glyphometrics/parallel.hpp"

namespace glyphometrics {

Glyph measured_glyph(const ScriptCorpus& corpus, const Glyph& g, bool normalize_it) {
  Glyph out = g;
  if (!out.baseline_y) out.baseline_y = corpus.baseline_y;
  return normalize_it ? normalize(out, NormalizeMode::unit_diagonal) : out;
}

GlyphAnalysis analyze_glyph(const CorpusDocument& doc, const Glyph& source, const AnalysisOptions& options) {
  GlyphAnalysis a;
  a.glyph_id = source.id;
  try {
    const Glyph g = measured_glyph(doc.corpus, source, options.normalize);
    if (const auto it = doc.trajectories.find(g.id); it != doc.trajectories.end()) {
      require_valid(g, it->second);
      a.trajectory = it->second;
    } else {
      a.trajectory = select_trajectory(g, reconstruct(g, options.reconstruction), 0);
      a.reconstructed = true;
    }
    const auto lm = doc.landmarks.find(g.id);
    if (lm != doc.landmarks.end() && !a.reconstructed) {
      auto landmarks = lm->second;
      if (options.normalize) {
        const Rect box = bounding_box(measured_glyph(doc.corpus, source, false));
        for (auto& l : landmarks) l.location = (l.location - box.min) / box.diagonal();
      }
      a.segmentation = segment_strokes(g, *a.trajectory, landmarks, options.segmentation);
    } else {
      a.segmentation = segment(g, *a.trajectory, options.segmentation);
    }
    a.record = compute_all(g, *a.trajectory, *a.segmentation, options.metrics);
  } catch (const Error& e) {
    a.error = e.what();
  }
  return a;
}

std::vector<GlyphAnalysis> analyze(const CorpusDocument& doc, const AnalysisOptions& options) {
  std::vector<GlyphAnalysis> out(doc.corpus.glyphs.size());
  parallel_for(static_cast<int>(out.size()), options.threads,
               [&](int i) { out[i] = analyze_glyph(doc, doc.corpus.glyphs[i], options); });
  return out;
}

ScriptReport script_report(const CorpusDocument& doc, const std::vector<GlyphAnalysis>& analyses,
                           const AnalysisOptions& options, Weighting weighting) {
  ScriptReport rep;
  ScriptCorpus ok_corpus = doc.corpus;
  ok_corpus.glyphs.clear();
  std::vector<MetricRecord> records;
  std::map<std::string, Trajectory> trajectories;
  std::vector<std::vector<DirectionCode>> sequences;
  for (const auto& a : analyses) {
    if (!a.record) {
      rep.warnings.push_back("glyph '" + a.glyph_id + "' skipped: " + a.error);
      continue;
    }
    ok_corpus.glyphs.push_back(measured_glyph(doc.corpus, *doc.corpus.find(a.glyph_id), options.normalize));
    records.push_back(*a.record);
    trajectories[a.glyph_id] = *a.trajectory;
    if (!a.segmentation->stroke_inventory_key.empty()) sequences.push_back(a.segmentation->stroke_inventory_key);
    if (a.record->entropy_nats.has_value()) rep.glyph_entropies.push_back(*a.record->entropy_nats);
  }
  if (records.empty()) throw Error(ErrorCode::invalid_input, "script '" + doc.corpus.id + "' has no analysable glyphs");

  rep.metrics = aggregate(ok_corpus, records, weighting);
  if (!sequences.empty()) {
    rep.bigram = build_bigram_model(sequences, Smoothing::none);
    rep.bigram_smoothed = build_bigram_model(sequences, Smoothing::add_one);
  }
  if (ok_corpus.glyphs.size() >= 2) {
    rep.trajectory_similarity =
        similarity_matrix(ok_corpus, trajectories, DistinctivityMode::trajectory, 64, options.threads);
    rep.static_similarity =
        similarity_matrix(ok_corpus, trajectories, DistinctivityMode::static_shape, 64, options.threads);
  }
  rep.directions = direction_summary(records);
  return rep;
}

int default_threads() {
  if (const char* env = std::getenv("GLYPHOMETRICS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace glyphometrics
