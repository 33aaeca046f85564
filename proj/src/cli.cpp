#include "glyphometrics/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <set>

#include "glyphometrics/annotation_service.hpp"
#include "glyphometrics/fixtures.hpp"
#include "glyphometrics/parallel.hpp"

namespace glyphometrics {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ReconstructionWeights parse_weights(const std::string& spec) {
  ReconstructionWeights w;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--weights expects name=value pairs, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--weights: '" + item.substr(eq + 1) + "' is not a number");
    }
    if (!std::isfinite(v) || v < 0) throw UsageError("--weights: " + name + " must be finite and >= 0");
    if (name == "pen_up") w.pen_up = v;
    else if (name == "turn_per_degree") w.turn_per_degree = v;
    else if (name == "retrace_per_length") w.retrace_per_length = v;
    else if (name == "start_prior") w.start_prior = v;
    else throw UsageError("--weights: unknown weight '" + name +
                          "' (pen_up, turn_per_degree, retrace_per_length, start_prior)");
  }
  return w;
}

void write_json(const json& j, const fs::path& path) {
  write_file_atomic(path, jsonio::canonicalized(j).dump(2) + "\n");
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out.empty() ? "_" : out;
}

int report_failures(const std::vector<GlyphAnalysis>& analyses, std::ostream& err) {
  int failed = 0;
  for (const auto& a : analyses)
    if (!a.error.empty()) {
      err << "glyph " << a.glyph_id << ": " << a.error << "\n";
      ++failed;
    }
  return failed;
}

struct Options {
  std::vector<std::string> corpora;
  std::string out;
  bool flip_y = false;
  int top = 5;
  std::string weights;
  bool missing_only = false;
  double sharp_deg = SegmentationConfig{}.sharp_junction_threshold_deg;
  double prominence = SegmentationConfig{}.curvature_prominence;
  bool normalize = false;
  std::string mode = "trajectory";
  std::string weighting = "uniform";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string fixture;
  int glyphs = 50;
  bool no_trajectories = false;
};

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  const auto doc = load_corpus(o.corpora[0], {o.flip_y});
  int bad = 0;
  for (const auto& g : doc.corpus.glyphs) {
    std::vector<std::string> issues = validate(g);
    if (issues.empty()) {
      if (const auto t = doc.trajectories.find(g.id); t != doc.trajectories.end())
        for (auto& m : validate(g, t->second)) issues.push_back("trajectory: " + m);
      if (const auto c = doc.candidates.find(g.id); c != doc.candidates.end())
        for (std::size_t i = 0; i < c->second.size(); ++i)
          for (auto& m : validate(g, c->second[i].trajectory))
            issues.push_back("candidate " + std::to_string(i) + ": " + m);
    }
    if (doc.landmarks.count(g.id) && !doc.trajectories.count(g.id))
      issues.push_back("landmarks stored without a trajectory");
    for (const auto& m : issues) out << "glyph " << g.id << ": " << m << "\n";
    bad += !issues.empty();
  }
  out << doc.corpus.glyphs.size() << " glyphs, " << doc.trajectories.size() << " trajectories, " << bad
      << " with problems\n";
  return bad ? 1 : 0;
}

int cmd_reconstruct(const Options& o, std::ostream& out, std::ostream& err) {
  ReconstructionConfig cfg;
  cfg.weights = parse_weights(o.weights);
  cfg.max_candidates = o.top;
  auto doc = load_corpus(o.corpora[0], {o.flip_y});
  const int n = static_cast<int>(doc.corpus.glyphs.size());
  std::vector<std::vector<CandidateTrajectory>> results(n);
  std::vector<std::string> errors(n);
  parallel_for(n, default_threads(), [&](int i) {
    const Glyph& g = doc.corpus.glyphs[i];
    if (o.missing_only && doc.trajectories.count(g.id)) return;
    try {
      results[i] = reconstruct(g, cfg);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  int failed = 0;
  for (int i = 0; i < n; ++i) {
    const Glyph& g = doc.corpus.glyphs[i];
    if (!errors[i].empty()) {
      err << "glyph " << g.id << ": " << errors[i] << "\n";
      ++failed;
      continue;
    }
    if (results[i].empty()) continue;
    const Trajectory best = select_trajectory(g, results[i], 0);
    const auto old = doc.trajectories.find(g.id);
    if (old == doc.trajectories.end() || old->second.pen_strokes != best.pen_strokes) doc.landmarks.erase(g.id);
    doc.trajectories[g.id] = best;
    doc.candidates[g.id] = results[i];
    out << g.id << ": " << results[i].size() << " candidates, best score " << format_number(results[i][0].score)
        << "\n";
  }
  save_corpus(doc, o.out.empty() ? fs::path(o.corpora[0]) : fs::path(o.out));
  return failed ? 1 : 0;
}

int cmd_segment(const Options& o, std::ostream& out, std::ostream& err) {
  SegmentationConfig cfg;
  cfg.sharp_junction_threshold_deg = o.sharp_deg;
  cfg.curvature_prominence = o.prominence;
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  auto doc = load_corpus(o.corpora[0], {o.flip_y});
  const int n = static_cast<int>(doc.corpus.glyphs.size());
  std::vector<std::optional<SegmentationResult>> results(n);
  std::vector<std::string> errors(n);
  parallel_for(n, default_threads(), [&](int i) {
    const Glyph& g = doc.corpus.glyphs[i];
    const auto t = doc.trajectories.find(g.id);
    if (t == doc.trajectories.end()) {
      errors[i] = "no trajectory; run reconstruct first";
      return;
    }
    try {
      results[i] = segment(g, t->second, cfg);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  int failed = 0;
  for (int i = 0; i < n; ++i) {
    const Glyph& g = doc.corpus.glyphs[i];
    if (!results[i]) {
      err << "glyph " << g.id << ": " << errors[i] << "\n";
      ++failed;
      continue;
    }
    doc.landmarks[g.id] = results[i]->landmarks;
    std::string codes;
    for (auto c : results[i]->stroke_inventory_key) codes += (codes.empty() ? "" : " ") + std::string(to_string(c));
    out << g.id << ": " << results[i]->landmarks.size() << " landmarks, " << results[i]->strokes.size()
        << " strokes [" << codes << "]\n";
  }
  save_corpus(doc, o.out.empty() ? fs::path(o.corpora[0]) : fs::path(o.out));
  return failed ? 1 : 0;
}

AnalysisOptions analysis_options(const Options& o) {
  AnalysisOptions a;
  a.normalize = o.normalize;
  a.threads = default_threads();
  return a;
}

int cmd_metrics(const Options& o, std::ostream& out, std::ostream& err) {
  const auto doc = load_corpus(o.corpora[0], {o.flip_y});
  const auto analyses = analyze(doc, analysis_options(o));
  std::vector<MetricRecord> records;
  for (const auto& a : analyses)
    if (a.record) records.push_back(*a.record);
  const int failed = report_failures(analyses, err);
  if (records.empty()) throw Error(ErrorCode::invalid_input, "no glyph could be measured");
  write_csv(records_table(records), o.out);
  out << records.size() << " glyphs measured, " << failed << " failed\n";
  return failed ? 1 : 0;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const auto doc = load_corpus(o.corpora[0], {o.flip_y});
  const auto options = analysis_options(o);
  std::map<std::string, Trajectory> trajectories = doc.trajectories;
  if (o.mode == "trajectory") {
    // Missing trajectories are reconstructed (rank 0) as the metrics command does.
    for (const auto& a : analyze(doc, options))
      if (a.trajectory) trajectories[a.glyph_id] = *a.trajectory;
  }
  ScriptCorpus corpus = doc.corpus;
  for (auto& g : corpus.glyphs) g = measured_glyph(doc.corpus, g, o.normalize);
  const auto mode = o.mode == "static" ? DistinctivityMode::static_shape : DistinctivityMode::trajectory;
  const auto sm = similarity_matrix(corpus, trajectories, mode, 64, options.threads);
  for (const auto& [id, why] : sm.flagged) err << "glyph " << id << ": " << why << "\n";
  write_csv(similarity_table(sm), o.out);
  out << sm.glyph_ids.size() << "x" << sm.glyph_ids.size() << " matrix, " << sm.flagged.size() << " flagged\n";
  return sm.flagged.empty() ? 0 : 1;
}

int cmd_script_stats(const Options& o, std::ostream& out, std::ostream& err) {
  const AnalysisOptions options = analysis_options(o);
  const Weighting weighting = o.weighting == "frequency" ? Weighting::frequency : Weighting::uniform;
  std::vector<CorpusDocument> docs;
  std::set<std::string> ids;
  for (const auto& path : o.corpora) {
    docs.push_back(load_corpus(path, {o.flip_y}));
    if (!ids.insert(docs.back().corpus.id).second)
      throw Error(ErrorCode::invalid_input, "script id '" + docs.back().corpus.id + "' appears twice");
  }
  const fs::path dir = o.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create '" + dir.string() + "'");

  int failed = 0;
  std::vector<ScriptMetrics> scripts;
  Table counts{{"script_id", "glyph_id", "disjointed", "downstrokes", "pen_strokes", "primitive", "retraces",
                "upstrokes"},
               {}};
  Table entropy{{"script_id", "bin_lo", "bin_hi", "count"}, {}};
  Table directions{{"script_id", "angle", "N", "NE", "E", "SE", "S", "SW", "W", "NW", "modal"}, {}};
  json summary = {{"scripts", json::array()}};

  for (const auto& doc : docs) {
    const auto analyses = analyze(doc, options);
    failed += report_failures(analyses, err);
    const ScriptReport rep = script_report(doc, analyses, options, weighting);
    const std::string sid = doc.corpus.id;
    const fs::path sdir = dir / safe_name(sid);
    fs::create_directories(sdir / "histograms", ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create '" + (sdir / "histograms").string() + "'");

    std::vector<MetricRecord> records;
    for (const auto& [id, r] : rep.metrics.per_glyph) records.push_back(r);
    for (const auto& a : analyses) {
      if (!a.record) continue;
      const auto& c = a.record->counts;
      counts.rows.push_back({sid, a.glyph_id, std::to_string(c.disjointed), std::to_string(c.downstrokes),
                             std::to_string(c.pen_strokes), std::to_string(c.primitive), std::to_string(c.retraces),
                             std::to_string(c.upstrokes)});
    }
    const Histogram eh = fixed_histogram(rep.glyph_entropies, 0.0, std::log(8.0), 8);
    for (const auto& row : histogram_table(eh).rows) entropy.rows.push_back({sid, row[0], row[1], row[2]});
    write_csv(histogram_table(eh), sdir / "entropy_histogram.csv");

    const auto dir_row = [&](const char* which, const std::array<int, 8>& c, const std::optional<DirectionCode>& m) {
      std::vector<std::string> row{sid, which};
      for (int v : c) row.push_back(std::to_string(v));
      row.push_back(m ? std::string(to_string(*m)) : "");
      directions.rows.push_back(row);
    };
    dir_row("major", rep.directions.major, rep.directions.modal_major);
    dir_row("initial", rep.directions.initial, rep.directions.modal_initial);

    write_csv(records_table(records), sdir / "metrics.csv");
    write_csv(script_metrics_table(rep.metrics), sdir / "means.csv");
    for (const auto& [field, h] : rep.metrics.histograms) write_csv(histogram_table(h), sdir / "histograms" / (field + ".csv"));
    if (rep.trajectory_similarity) write_csv(similarity_table(*rep.trajectory_similarity), sdir / "similarity_trajectory.csv");
    if (rep.static_similarity) write_csv(similarity_table(*rep.static_similarity), sdir / "similarity_static.csv");
    write_json(jsonio::to_json(rep.directions), sdir / "directions.json");
    json bigram = {{"none", rep.bigram ? jsonio::to_json(*rep.bigram) : json(nullptr)},
                   {"add_one", rep.bigram_smoothed ? jsonio::to_json(*rep.bigram_smoothed) : json(nullptr)}};
    write_json(bigram, sdir / "bigram.json");
    write_json(jsonio::to_json(rep.metrics), sdir / "script_metrics.json");

    json s = {{"script_id", sid},
              {"directory", safe_name(sid)},
              {"glyphs", doc.corpus.glyphs.size()},
              {"measured", records.size()},
              {"warnings", rep.warnings}};
    s["unigram_entropy_nats"] = rep.bigram ? json(rep.bigram->unigram_entropy_nats) : json(nullptr);
    s["conditional_entropy_nats"] = rep.bigram ? json(rep.bigram->conditional_entropy_nats) : json(nullptr);
    summary["scripts"].push_back(s);
    scripts.push_back(rep.metrics);
  }

  std::vector<std::string> fields;
  for (const auto& [name, m] : scripts.front().means) fields.push_back(name);
  const auto pc = export_parallel_coordinates(scripts, fields, false);
  const auto pcg = export_parallel_coordinates(scripts, fields, true);
  write_csv(parallel_coordinates_table(pc), dir / "parallel_coordinates.csv");
  write_csv(parallel_coordinates_table(pcg), dir / "parallel_coordinates_glyphs.csv");
  write_json(jsonio::to_json(pc), dir / "parallel_coordinates.json");
  write_csv(counts, dir / "stroke_counts.csv");
  write_csv(entropy, dir / "entropy_histograms.csv");
  write_csv(directions, dir / "direction_summary.csv");
  summary["parallel_coordinates_warnings"] = pc.warnings;
  write_json(summary, dir / "summary.json");
  out << scripts.size() << " scripts written to " << dir.string() << "\n";
  return failed ? 1 : 0;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream&) {
  auto service = AnnotationService::open(o.corpora[0]);
  HttpServer server(service);
  const int port = server.start(o.host, o.port);
  out << "serving " << o.corpora[0] << " on http://" << o.host << ":" << port << std::endl;
  server.wait();
  return 0;
}

int cmd_make_fixture(const Options& o, std::ostream& out, std::ostream&) {
  save_corpus(fixtures::document(o.fixture, o.glyphs, !o.no_trajectories), o.out);
  out << "wrote " << o.out << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Glyph shape, trajectory and script statistics.", "glyphometrics"};
  app.require_subcommand(1);
  Options o;

  const auto corpus_arg = [&](CLI::App* c) { c->add_option("corpus", o.corpora, "Corpus JSON file")->required()->expected(1); };
  const auto flip = [&](CLI::App* c) { c->add_flag("--flip-y", o.flip_y, "Input uses screen coordinates (y down)"); };

  auto* validate_cmd = app.add_subcommand("validate", "Check a corpus file");
  corpus_arg(validate_cmd);
  flip(validate_cmd);

  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Rank candidate trajectories and select the best");
  corpus_arg(reconstruct_cmd);
  flip(reconstruct_cmd);
  reconstruct_cmd->add_option("--top", o.top, "Candidates kept per glyph")->check(CLI::Range(1, 50));
  reconstruct_cmd->add_option("--weights", o.weights,
                              "Comma-separated name=value: pen_up, turn_per_degree, retrace_per_length, start_prior");
  reconstruct_cmd->add_flag("--missing-only", o.missing_only, "Only glyphs without a trajectory");
  reconstruct_cmd->add_option("--out", o.out, "Write here instead of in place");

  auto* segment_cmd = app.add_subcommand("segment", "Detect landmarks and store them");
  corpus_arg(segment_cmd);
  flip(segment_cmd);
  segment_cmd->add_option("--sharp-deg", o.sharp_deg, "Sharp junction turn threshold in degrees");
  segment_cmd->add_option("--prominence", o.prominence, "Curvature peak prominence, fraction of max |curvature|");
  segment_cmd->add_option("--out", o.out, "Write here instead of in place");

  auto* metrics_cmd = app.add_subcommand("metrics", "Per-glyph metrics as CSV");
  corpus_arg(metrics_cmd);
  flip(metrics_cmd);
  metrics_cmd->add_option("--out", o.out, "CSV path")->required();
  metrics_cmd->add_flag("--normalize", o.normalize, "Scale glyphs to unit bounding-box diagonal first");

  auto* compare_cmd = app.add_subcommand("compare", "Pairwise distinctivity matrix as CSV");
  corpus_arg(compare_cmd);
  flip(compare_cmd);
  compare_cmd->add_option("--out", o.out, "CSV path")->required();
  compare_cmd->add_option("--mode", o.mode, "trajectory or static")->check(CLI::IsMember({"trajectory", "static"}));
  compare_cmd->add_flag("--normalize", o.normalize, "Scale glyphs to unit bounding-box diagonal first");

  auto* stats_cmd = app.add_subcommand("script-stats", "Script-level tables for one or more corpora");
  stats_cmd->add_option("corpora", o.corpora, "Corpus JSON files")->required();
  flip(stats_cmd);
  stats_cmd->add_option("--out-dir", o.out, "Output directory")->required();
  stats_cmd->add_option("--weighting", o.weighting, "uniform or frequency")
      ->check(CLI::IsMember({"uniform", "frequency"}));
  stats_cmd->add_flag("--normalize", o.normalize, "Scale glyphs to unit bounding-box diagonal first");

  auto* serve_cmd = app.add_subcommand("serve", "Annotation HTTP service");
  corpus_arg(serve_cmd);
  serve_cmd->add_option("--host", o.host, "Interface to bind");
  serve_cmd->add_option("--port", o.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

  auto* fixture_cmd = app.add_subcommand("make-fixture", "Write a bundled fixture corpus");
  fixture_cmd->add_option("name", o.fixture, "Fixture name")->required()->check(CLI::IsMember(fixtures::document_names()));
  fixture_cmd->add_option("--out", o.out, "Corpus JSON path")->required();
  fixture_cmd->add_option("--glyphs", o.glyphs, "Glyphs per synthetic stage")->check(CLI::Range(1, 10000));
  fixture_cmd->add_flag("--no-trajectories", o.no_trajectories, "Leave trajectories to be reconstructed");

  std::vector<std::string> argv_store{"glyphometrics"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  const auto usage = [&](const std::string& message) {
    err << "error: " << message << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  };

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out, err);
    if (*reconstruct_cmd) return cmd_reconstruct(o, out, err);
    if (*segment_cmd) return cmd_segment(o, out, err);
    if (*metrics_cmd) return cmd_metrics(o, out, err);
    if (*compare_cmd) return cmd_compare(o, out, err);
    if (*stats_cmd) return cmd_script_stats(o, out, err);
    if (*serve_cmd) return cmd_serve(o, out, err);
    if (*fixture_cmd) return cmd_make_fixture(o, out, err);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return usage("no command given");
}

}  // namespace glyphometrics
