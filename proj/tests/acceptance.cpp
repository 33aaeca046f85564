// Acceptance gate: one PASS/FAIL line per primary criterion, nonzero exit on
// any failure. Tolerances and time limits are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glyphometrics/cli.hpp"
#include "glyphometrics/dtw.hpp"
#include "glyphometrics/fixtures.hpp"
#include "glyphometrics/metrics.hpp"
#include "glyphometrics/reconstruction.hpp"
#include "glyphometrics/script_analysis.hpp"
#include "oracles.hpp"
#include "reconstruction_oracle.hpp"

using namespace glyphometrics;
namespace fs = std::filesystem;

namespace {

// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
};

int failed = 0;

void criterion(const std::string& name, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_s) c.failures.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s) + " s");
  const bool ok = c.failures.empty();
  failed += !ok;
  std::printf("%s %s (%.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", name.c_str(), secs, limit_s);
  for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  std::fflush(stdout);
}

bool rel_eq(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return files;
}

// The artifacts checked here never need quoting.
std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
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

bool same_hull(Polyline fast, const Polyline& brute) {
  std::sort(fast.begin(), fast.end(),
            [](const Point& a, const Point& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  return fast == brute;
}

void worked_example(Check& c) {
  const auto s = fixtures::worked_example();
  const auto seg = segment(s.glyph, s.trajectory);
  const auto counts = stroke_counts(seg);
  c.expect(counts.pen_strokes == 1, "pen_strokes " + std::to_string(counts.pen_strokes));
  c.expect(counts.disjointed == 3, "disjointed " + std::to_string(counts.disjointed));
  c.expect(counts.primitive == 8, "primitive " + std::to_string(counts.primitive));
  c.expect(counts.retraces == 1, "retraces " + std::to_string(counts.retraces));
  const int dis = disfluency(seg).first;
  c.expect(dis == 6, "disfluency " + std::to_string(dis));
}

void entropy_checks(Check& c) {
  using D = DirectionCode;
  const double e7 = entropy(std::vector<D>{D::N, D::E, D::W, D::S, D::NW, D::SE, D::SW});
  c.expect(std::abs(e7 - std::log(7.0)) <= 1e-9, "seven-code sample " + std::to_string(e7));
  for (int k = 1; k <= 8; ++k) {
    std::vector<D> codes;
    for (int rep = 0; rep < 4; ++rep)
      for (int i = 0; i < k; ++i) codes.push_back(kDirectionCodes[i]);
    c.expect(std::abs(entropy(codes) - std::log(double(k))) <= 1e-9, "uniform k=" + std::to_string(k));
  }
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    std::vector<D> codes(std::uniform_int_distribution<int>(1, 40)(rng));
    for (auto& x : codes) x = kDirectionCodes[std::uniform_int_distribution<int>(0, 7)(rng)];
    const double e = entropy(codes);
    c.expect(e >= 0 && e <= std::log(8.0) + 1e-12, "random sequence out of range");
  }
}

void geometry_oracles(Check& c) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 200; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    Polyline pts = oracle::random_points(rng, n);
    // Some instances on a coarse grid so collinear and duplicate points occur.
    if (i % 4 == 0)
      for (auto& p : pts) p = Point(std::round(p.x() * 3), std::round(p.y() * 3));
    c.expect(same_hull(convex_hull(pts), oracle::hull_vertices(pts)), "hull instance " + std::to_string(i));
    const auto fast = min_enclosing_circle(pts);
    const auto brute = oracle::brute_enclosing_circle(pts, 1e-9);
    c.expect(std::abs(fast.radius - brute.radius) <= 1e-9, "circle radius instance " + std::to_string(i));
    bool covers = true;
    for (const auto& p : pts) covers = covers && (p - fast.center).norm() <= fast.radius + 1e-9;
    c.expect(covers, "circle does not cover instance " + std::to_string(i));
  }
  for (int i = 0; i < 100; ++i) {
    Polyline walk = {{0, 0}};
    std::normal_distribution<double> step(0, 1);
    const int n = std::uniform_int_distribution<int>(2, 80)(rng);
    for (int k = 0; k < n; ++k) walk.push_back(walk.back() + Point(step(rng), step(rng)));
    const double eps = std::uniform_real_distribution<double>(0.05, 3.0)(rng);
    const Polyline out = rdp_simplify(walk, eps);
    c.expect(out.front() == walk.front() && out.back() == walk.back(), "rdp endpoints " + std::to_string(i));
    c.expect(oracle::max_deviation(walk, out) <= eps, "rdp deviation " + std::to_string(i));
  }
  for (double r : {0.5, 1.0, 2.0, 5.0}) {
    const Spline s = oracle::circle_spline({0.3, -1.2}, r);
    for (int i = 0; i <= 200; ++i)
      c.expect(std::abs(curvature_at(s, i / 200.0) - 1 / r) <= 0.01 / r, "circle curvature r=" + std::to_string(r));
  }
}

void dtw_checks(Check& c) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto a = fixtures::synthetic(rng, "a");
    const auto b = fixtures::synthetic(rng, "b");
    for (auto mode : {DistinctivityMode::trajectory, DistinctivityMode::static_shape}) {
      const auto pa = distinctivity_profile(a.glyph, &a.trajectory, mode);
      const auto pb = distinctivity_profile(b.glyph, &b.trajectory, mode);
      c.expect(dtw(pa, pa).cost == 0.0, "identity pair " + std::to_string(i));
      const auto ab = dtw(pa, pb), ba = dtw(pb, pa);
      c.expect(ab.cost == ba.cost, "symmetry pair " + std::to_string(i));
      c.expect(ab.cost >= 0.0, "negative cost pair " + std::to_string(i));
      const double d = distinctivity(a.glyph, &a.trajectory, b.glyph, &b.trajectory, mode);
      c.expect(d >= 0.0 && d == distinctivity(b.glyph, &b.trajectory, a.glyph, &a.trajectory, mode),
               "distinctivity pair " + std::to_string(i));
    }
  }
  Eigen::VectorXd x(3), y(3);
  x << 1, 2, 3;
  y << 2, 3, 4;
  const double raw = dtw(x, y).cost;
  const double brute = oracle::dtw_by_enumeration({1, 2, 3}, {2, 3, 4});
  c.expect(std::abs(raw - 2.0) <= 1e-12 && std::abs(raw - brute) <= 1e-12,
           "1-D cost " + std::to_string(raw) + " oracle " + std::to_string(brute));
}

void scale_laws(Check& c) {
  std::mt19937_64 rng(555);
  for (int i = 0; i < 50; ++i) {
    const auto s = fixtures::synthetic(rng, "g");
    const auto base = compute_all(s.glyph, s.trajectory, segment(s.glyph, s.trajectory));
    const auto base_fields = scalar_fields(base);
    const std::string id = "glyph " + std::to_string(i);
    for (double k : {0.5, 2.0, 10.0}) {
      const Glyph g = scaled(s.glyph, k);
      const auto r = compute_all(g, s.trajectory, segment(g, s.trajectory));
      const std::string at = id + " s=" + std::to_string(k);
      c.expect(rel_eq(*r.length, k * *base.length, 1e-6), "length " + at);
      c.expect(rel_eq(*r.divergence, k * *base.divergence, 1e-6), "divergence " + at);
      c.expect(rel_eq(*r.size, k * k * *base.size, 1e-6), "size " + at);
      c.expect(base.avg_curvature.has_value() == r.avg_curvature.has_value(), "avg_curvature defined " + at);
      if (base.avg_curvature.has_value())
        c.expect(std::abs(*r.avg_curvature - *base.avg_curvature / k) <=
                     1e-6 * std::max(std::abs(*base.avg_curvature / k), 1e-12),
                 "avg_curvature " + at);
      if (base.compactness.has_value()) c.expect(rel_eq(*r.compactness, *base.compactness / k, 1e-6), "compactness " + at);
      c.expect(std::abs(r.pen_drag_distance - k * base.pen_drag_distance) <=
                   1e-6 * std::max(k * base.pen_drag_distance, 1e-12),
               "pen_drag_distance " + at);
      const auto fields = scalar_fields(r);
      for (const auto& name : scale_invariant_fields()) {
        const auto& a = base_fields.at(name);
        const auto& b = fields.at(name);
        c.expect(a.has_value() == b.has_value(), name + " defined " + at);
        if (a.has_value() && b.has_value())
          c.expect(std::abs(*a - *b) <= 1e-6 * std::max(1.0, std::abs(*a)), name + " " + at);
      }
    }
  }
}

void reconstruction_round_trip(Check& c) {
  std::mt19937_64 rng(2024);
  const ReconstructionConfig cfg;
  int top3 = 0, enumerable = 0;
  for (int i = 0; i < 20; ++i) {
    const auto s = fixtures::synthetic(rng, "g" + std::to_string(i), 8);
    c.expect(s.glyph.segments.size() <= 8, "suite glyph exceeds 8 segments");
    const auto cands = reconstruct(s.glyph, cfg);
    bool found = false;
    for (std::size_t k = 0; k < std::min<std::size_t>(3, cands.size()); ++k)
      found = found || cands[k].trajectory.pen_strokes == s.trajectory.pen_strokes;
    top3 += found;
    if (int(s.glyph.segments.size()) <= cfg.exhaustive_segment_limit) {
      ++enumerable;
      const double best = oracle::MinScore(s.glyph, cfg.weights).solve();
      c.expect(!cands.empty() && std::abs(cands.front().score - best) <= 1e-9 * std::max(1.0, std::abs(best)),
               "glyph " + std::to_string(i) + " top score above the enumerated minimum");
    }
  }
  std::printf("    true trajectory in top-3: %d/20, enumerable cases: %d\n", top3, enumerable);
  c.expect(top3 >= 18, "top-3 recovery " + std::to_string(top3) + "/20");
}

void pipeline_shape(Check& c) {
  const fs::path dir = fs::temp_directory_path() / "glyphometrics_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream out, err;
  std::vector<std::string> corpora;
  const std::vector<std::string> stages = {"stage-early", "stage-middle", "stage-late"};
  for (const auto& stage : stages) {
    corpora.push_back((dir / (stage + ".json")).string());
    c.expect(run_cli({"make-fixture", stage, "--glyphs", "50", "--out", corpora.back()}, out, err) == 0,
             "make-fixture " + stage);
  }
  const auto run = [&](const std::string& name, double& secs) {
    std::vector<std::string> args = {"script-stats"};
    args.insert(args.end(), corpora.begin(), corpora.end());
    args.insert(args.end(), {"--out-dir", (dir / name).string()});
    const auto t0 = std::chrono::steady_clock::now();
    const int code = run_cli(args, out, err);
    secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(code == 0, "script-stats exit " + std::to_string(code) + ": " + err.str());
  };
  double first = 0, second = 0;
  run("a", first);
  run("b", second);
  std::printf("    3x50-glyph script-stats: %.2f s, %.2f s\n", first, second);
  c.expect(std::min(first, second) < 5.0, "full metric suite over 3x50 glyphs not under 5 s");

  const auto files = tree(dir / "a");
  c.expect(files == tree(dir / "b"), "outputs differ between runs");
  for (const char* f : {"parallel_coordinates.csv", "parallel_coordinates.json", "stroke_counts.csv",
                        "entropy_histograms.csv", "direction_summary.csv", "summary.json"})
    c.expect(files.count(f) == 1, std::string("missing ") + f);

  const auto pc = csv(files.at("parallel_coordinates.csv"));
  c.expect(pc.size() == 4, "parallel-coordinates rows " + std::to_string(pc.size() - 1));
  for (std::size_t r = 1; r < pc.size(); ++r)
    for (std::size_t col = 0; col < pc[0].size(); ++col) {
      const auto& h = pc[0][col];
      if (h == "script_id" || h == "glyph_id" || h.ends_with("_raw") || pc[r][col].empty()) continue;
      const double v = std::stod(pc[r][col]);
      c.expect(v >= 0.0 && v <= 1.0, "normalized " + h + " out of [0, 1]");
    }

  const auto counts = csv(files.at("stroke_counts.csv"));
  c.expect(counts[0] == std::vector<std::string>{"script_id", "glyph_id", "disjointed", "downstrokes", "pen_strokes",
                                                 "primitive", "retraces", "upstrokes"},
           "stroke-count columns");
  c.expect(counts.size() == 1 + 150, "stroke-count rows");

  const auto entropy_rows = csv(files.at("entropy_histograms.csv"));
  c.expect(entropy_rows.size() == 1 + 3 * 8, "entropy histogram rows");
  c.expect(csv(files.at("direction_summary.csv")).size() == 1 + 6, "direction summary rows");

  for (const auto& stage : stages) {
    for (const char* f : {"entropy_histogram.csv", "directions.json", "bigram.json", "means.csv", "metrics.csv"})
      c.expect(files.count(stage + "/" + f) == 1, "missing " + stage + "/" + f);
    for (const char* m : {"similarity_trajectory.csv", "similarity_static.csv"}) {
      const auto key = stage + "/" + m;
      if (!files.count(key)) {
        c.expect(false, "missing " + key);
        continue;
      }
      const auto rows = csv(files.at(key));
      c.expect(rows.size() == 51, key + " rows");
      for (std::size_t i = 1; i < rows.size(); ++i) {
        c.expect(rows[i].size() == 51, key + " columns");
        if (rows[i].size() != 51) break;
        c.expect(rows[i][i] == "0", key + " diagonal");
        for (std::size_t j = 1; j < i; ++j) c.expect(rows[i][j] == rows[j][i], key + " symmetry");
      }
    }
  }
  fs::remove_all(dir);
}

void bigram_model(Check& c) {
  using D = DirectionCode;
  const auto toy = build_bigram_model({{D::N, D::E, D::N, D::E}});
  c.expect(std::abs(toy.conditional_entropy_nats) <= 1e-9, "toy conditional " + std::to_string(toy.conditional_entropy_nats));
  c.expect(std::abs(toy.unigram_entropy_nats - std::log(2.0)) <= 1e-9, "toy unigram " + std::to_string(toy.unigram_entropy_nats));
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<D>> seqs(1 + rng() % 30);
    const int alphabet = 1 + rng() % 8;
    for (auto& s : seqs) {
      s.resize(1 + rng() % 12);
      for (auto& x : s) x = kDirectionCodes[rng() % alphabet];
    }
    const auto m = build_bigram_model(seqs);
    c.expect(m.conditional_entropy_nats <= m.unigram_entropy_nats + 1e-12, "random corpus " + std::to_string(trial));
  }
}

void corpus_round_trip(Check& c) {
  const fs::path dir = fs::temp_directory_path() / "glyphometrics_acceptance_io";
  fs::create_directories(dir);
  for (const auto& name : fixtures::document_names()) {
    for (bool with_trajectories : {true, false}) {
      const auto doc = fixtures::document(name, 50, with_trajectories);
      const fs::path p = dir / (name + ".json");
      save_corpus(doc, p);
      const auto once = load_corpus(p);
      const std::string canon = canonical_string(once);
      save_corpus(once, p);
      const auto twice = load_corpus(p);
      c.expect(canonical_string(twice) == canon, name + " load/save/load is not a fixpoint");
      c.expect(slurp(p) == canon, name + " file is not in canonical form");
    }
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  criterion("worked-example stroke counts", 1, worked_example);
  criterion("direction entropy", 1, entropy_checks);
  criterion("geometry against brute-force oracles", 30, geometry_oracles);
  criterion("dtw identity, symmetry, non-negativity, exhaustive cost", 10, dtw_checks);
  criterion("scale laws", 30, scale_laws);
  criterion("reconstruction round trip", 60, reconstruction_round_trip);
  criterion("script-stats pipeline shape and determinism", 120, pipeline_shape);
  criterion("bigram model", 1, bigram_model);
  criterion("corpus round trip", 10, corpus_round_trip);
  std::printf("%s: %d failing\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
