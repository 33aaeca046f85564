#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "glyphometrics/cli.hpp"
#include "glyphometrics/fixtures.hpp"
#include "glyphometrics/pipeline.hpp"

using namespace glyphometrics;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "glyphometrics_test_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return files;
}

}  // namespace

TEST_CASE("usage errors exit 2 with usage on the error stream") {
  auto r = run({"metrics", "x.json", "--out", "m.csv", "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"reconstruct", "x.json", "--top", "0"}).code == 2);
  CHECK(run({"reconstruct", "x.json", "--weights", "pen_up=abc"}).code == 2);
  CHECK(run({"reconstruct", "x.json", "--weights", "speed=1"}).code == 2);
  CHECK(run({"segment", "x.json", "--prominence", "2"}).code == 2);
  CHECK(run({"compare", "x.json", "--out", "m.csv", "--mode", "fast"}).code == 2);
  CHECK(run({"make-fixture", "nonsense", "--out", "x.json"}).code == 2);
  r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("script-stats") != std::string::npos);
}

TEST_CASE("domain errors exit 1") {
  const auto dir = scratch("domain");
  auto r = run({"metrics", (dir / "missing.json").string(), "--out", (dir / "m.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("io-error") != std::string::npos);

  std::ofstream(dir / "bad.json") << "{\"format_version\": \"2.0\"}";
  r = run({"validate", (dir / "bad.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("unsupported-version") != std::string::npos);

  auto doc = fixtures::document("basic");
  doc.trajectories["l"].pen_strokes[0].path.pop_back();  // no longer covers the glyph
  save_corpus(doc, dir / "broken.json");
  r = run({"validate", (dir / "broken.json").string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("glyph l: trajectory:") != std::string::npos);
}

TEST_CASE("metrics writes one row per glyph") {
  const auto dir = scratch("metrics");
  const auto corpus = (dir / "basic.json").string();
  REQUIRE(run({"make-fixture", "basic", "--out", corpus}).code == 0);
  const auto r = run({"metrics", corpus, "--out", (dir / "m.csv").string()});
  CHECK(r.code == 0);
  const auto rows = read_csv(dir / "m.csv");
  CHECK(rows.size() == 7);
  CHECK(rows[0][0] == "glyph_id");
  CHECK(rows[1][0] == "vertical");
}

TEST_CASE("reconstruct, segment, metrics equals the library composed directly") {
  const auto dir = scratch("compose");
  const auto corpus = (dir / "basic.json").string();
  REQUIRE(run({"make-fixture", "basic", "--no-trajectories", "--out", corpus}).code == 0);
  auto r = run({"reconstruct", corpus, "--top", "3"});
  REQUIRE(r.code == 0);
  const auto after = load_corpus(corpus);
  for (const auto& g : after.corpus.glyphs) {
    CAPTURE(g.id);
    const auto& cands = after.candidates.at(g.id);
    CHECK(cands.size() <= 3);
    CHECK(after.trajectories.at(g.id).pen_strokes == cands[0].trajectory.pen_strokes);
  }
  REQUIRE(run({"segment", corpus}).code == 0);
  REQUIRE(load_corpus(corpus).landmarks.size() == after.corpus.glyphs.size());
  REQUIRE(run({"metrics", corpus, "--out", (dir / "m.csv").string()}).code == 0);

  const auto source = fixtures::document("basic", 0, false);
  std::vector<MetricRecord> direct;
  for (const auto& g0 : source.corpus.glyphs) {
    const Glyph g = measured_glyph(source.corpus, g0, false);
    ReconstructionConfig cfg;
    cfg.max_candidates = 3;
    const Trajectory t = select_trajectory(g, reconstruct(g, cfg), 0);
    direct.push_back(compute_all(g, t, segment(g, t)));
  }
  const auto expected = records_table(direct);
  const auto got = read_csv(dir / "m.csv");
  REQUIRE(got.size() == expected.rows.size() + 1);
  CHECK(got[0] == expected.header);
  for (std::size_t i = 0; i < expected.rows.size(); ++i)
    for (std::size_t c = 0; c < expected.header.size(); ++c) {
      CAPTURE(expected.header[c]);
      const auto& want = expected.rows[i][c];
      const auto& have = got[i + 1][c];
      if (c == 0 || want.empty() || want.find(';') != std::string::npos || have.empty()) {
        CHECK(have == want);
      } else {
        CHECK(std::stod(have) == doctest::Approx(std::stod(want)).epsilon(1e-5));
      }
    }
}

TEST_CASE("compare writes a square symmetric matrix") {
  const auto dir = scratch("compare");
  const auto corpus = (dir / "s.json").string();
  REQUIRE(run({"make-fixture", "stage-early", "--glyphs", "5", "--out", corpus}).code == 0);
  for (const char* mode : {"trajectory", "static"}) {
    REQUIRE(run({"compare", corpus, "--out", (dir / "c.csv").string(), "--mode", mode}).code == 0);
    const auto rows = read_csv(dir / "c.csv");
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 1; i <= 5; ++i) {
      REQUIRE(rows[i].size() == 6);
      CHECK(rows[i][0] == rows[0][i]);
      CHECK(rows[i][i] == "0");
      for (std::size_t j = 1; j <= 5; ++j) CHECK(rows[i][j] == rows[j][i]);
    }
  }
}

TEST_CASE("script-stats emits every artifact deterministically") {
  const auto dir = scratch("stats");
  std::vector<std::string> corpora;
  for (const char* stage : {"stage-early", "stage-middle", "stage-late"}) {
    corpora.push_back((dir / (std::string(stage) + ".json")).string());
    REQUIRE(run({"make-fixture", stage, "--glyphs", "12", "--out", corpora.back()}).code == 0);
  }
  auto args = std::vector<std::string>{"script-stats"};
  args.insert(args.end(), corpora.begin(), corpora.end());
  auto a = args, b = args;
  a.insert(a.end(), {"--out-dir", (dir / "a").string()});
  b.insert(b.end(), {"--out-dir", (dir / "b").string()});
  REQUIRE(run(a).code == 0);
  setenv("GLYPHOMETRICS_THREADS", "3", 1);
  REQUIRE(run(b).code == 0);
  unsetenv("GLYPHOMETRICS_THREADS");
  const auto ta = tree(dir / "a");
  CHECK(ta == tree(dir / "b"));

  for (const char* f : {"parallel_coordinates.csv", "parallel_coordinates.json", "parallel_coordinates_glyphs.csv",
                        "stroke_counts.csv", "entropy_histograms.csv", "direction_summary.csv", "summary.json"})
    CHECK_MESSAGE(ta.count(f), f);
  for (const char* s : {"stage-early", "stage-middle", "stage-late"})
    for (const char* f : {"metrics.csv", "means.csv", "entropy_histogram.csv", "similarity_trajectory.csv",
                          "similarity_static.csv", "directions.json", "bigram.json", "script_metrics.json",
                          "histograms/length.csv"})
      CHECK_MESSAGE(ta.count(std::string(s) + "/" + f), s, "/", f);

  const auto pc = read_csv(dir / "a" / "parallel_coordinates.csv");
  CHECK(pc.size() == 4);
  for (std::size_t r = 1; r < pc.size(); ++r)
    for (std::size_t c = 2; c < pc[r].size(); c += 2)
      if (!pc[r][c].empty()) {
        CHECK(std::stod(pc[r][c]) >= 0.0);
        CHECK(std::stod(pc[r][c]) <= 1.0);
      }

  const auto counts = read_csv(dir / "a" / "stroke_counts.csv");
  CHECK(counts[0] == std::vector<std::string>{"script_id", "glyph_id", "disjointed", "downstrokes", "pen_strokes",
                                              "primitive", "retraces", "upstrokes"});
  CHECK(counts.size() == 1 + 36);
  CHECK(read_csv(dir / "a" / "direction_summary.csv").size() == 1 + 6);
  CHECK(read_csv(dir / "a" / "entropy_histograms.csv").size() == 1 + 3 * 8);
}

TEST_CASE("script-stats rejects the same script twice") {
  const auto dir = scratch("dup");
  const auto corpus = (dir / "s.json").string();
  REQUIRE(run({"make-fixture", "s_curve", "--out", corpus}).code == 0);
  const auto r = run({"script-stats", corpus, corpus, "--out-dir", (dir / "o").string()});
  CHECK(r.code == 1);
}
