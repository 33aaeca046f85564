#include <doctest.h>

#include <random>

#include "glyphometrics/fixtures.hpp"
#include "glyphometrics/reconstruction.hpp"
#include "reconstruction_oracle.hpp"

using namespace glyphometrics;

namespace {

Glyph lines(std::initializer_list<std::pair<Point, Point>> segs) {
  Glyph g;
  g.id = "g";
  for (const auto& [a, b] : segs) g.segments.push_back(Spline::line(a, b));
  return g;
}

bool contains(const std::vector<CandidateTrajectory>& cands, const Trajectory& t, std::size_t within) {
  for (std::size_t i = 0; i < std::min(within, cands.size()); ++i)
    if (cands[i].trajectory.pen_strokes == t.pen_strokes) return true;
  return false;
}

}  // namespace

TEST_CASE("segment graph merges endpoints") {
  SUBCASE("single open segment") {
    const auto g = build_segment_graph(lines({{Point(0, 0), Point(0, 1)}}));
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
  }
  SUBCASE("three arms at one junction") {
    const auto g = build_segment_graph(lines({{Point(0, 2), Point(0, 1)},
                                              {Point(0, 1), Point(-1, 0)},
                                              {Point(1, 0), Point(0, 1 + 1e-9)}}));
    CHECK(g.nodes.size() == 4);
    CHECK(g.edges.size() == 3);
    int junctions = 0;
    for (int v = 0; v < 4; ++v) junctions += g.degree(v) == 3;
    CHECK(junctions == 1);
  }
  SUBCASE("closed loop is a self-loop") {
    const auto g = build_segment_graph(fixtures::circle(1.0).glyph);
    CHECK(g.nodes.size() == 1);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].from == g.edges[0].to);
    CHECK(g.degree(0) == 2);
  }
}

TEST_CASE("vertical stroke: two traversals, top start first") {
  const Glyph g = lines({{Point(0, 0), Point(0, 1)}});
  const auto cands = reconstruct(g);
  REQUIRE(cands.size() == 2);
  CHECK(pen_stroke_start(g, cands[0].trajectory.pen_strokes[0]).y() == doctest::Approx(1.0));
  CHECK(cands[0].trajectory.pen_strokes[0].path[0].reversed);
  CHECK(cands[0].score < cands[1].score);
}

TEST_CASE("disconnected segments force one pen-up") {
  const Glyph g = lines({{Point(0, 1), Point(0, 0)}, {Point(1, 1), Point(1, 0)}});
  const auto cands = reconstruct(g);
  REQUIRE(!cands.empty());
  for (const auto& c : cands) {
    CHECK(c.trajectory.pen_strokes.size() == 2);
    CHECK(c.breakdown.pen_ups == 1);
  }
}

TEST_CASE("candidates are valid, ranked and scored consistently") {
  std::mt19937_64 rng(11);
  const ReconstructionConfig cfg;
  for (int i = 0; i < 15; ++i) {
    const auto s = fixtures::synthetic(rng, "g" + std::to_string(i));
    const auto cands = reconstruct(s.glyph, cfg);
    REQUIRE(!cands.empty());
    CHECK(cands.size() <= 5);
    for (std::size_t k = 0; k < cands.size(); ++k) {
      CHECK(validate(s.glyph, cands[k].trajectory).empty());
      CHECK(cands[k].score == doctest::Approx(cands[k].breakdown.weighted(cfg.weights)).epsilon(1e-12));
      const auto again = score_trajectory(s.glyph, cands[k].trajectory);
      CHECK(again.weighted(cfg.weights) == doctest::Approx(cands[k].score).epsilon(1e-9));
      if (k > 0) CHECK(cands[k - 1].score <= cands[k].score + 1e-9);
      for (std::size_t j = 0; j < k; ++j) CHECK(!(cands[j].trajectory == cands[k].trajectory));
    }
  }
}

TEST_CASE("top candidate attains the brute-force minimum") {
  std::mt19937_64 rng(23);
  const ReconstructionWeights w;
  for (int i = 0; i < 30; ++i) {
    const auto s = fixtures::synthetic(rng, "g" + std::to_string(i));
    CAPTURE(i);
    const auto cands = reconstruct(s.glyph);
    oracle::MinScore brute(s.glyph, w);
    CHECK(cands.front().score == doctest::Approx(brute.solve()).epsilon(1e-9));
  }
}

TEST_CASE("translation keeps candidate order") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto s = fixtures::synthetic(rng, "g");
    const auto a = reconstruct(s.glyph);
    const auto b = reconstruct(transformed(s.glyph, Eigen::Matrix2d::Identity(), Point(3.5, -7.25)));
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].trajectory.pen_strokes == b[k].trajectory.pen_strokes);
  }
}

TEST_CASE("known trajectories are recovered") {
  std::mt19937_64 rng(2024);
  int top1 = 0, top3 = 0;
  const int n = 40;
  for (int i = 0; i < n; ++i) {
    const auto s = fixtures::synthetic(rng, "g" + std::to_string(i));
    const auto cands = reconstruct(s.glyph);
    top1 += contains(cands, s.trajectory, 1);
    top3 += contains(cands, s.trajectory, 3);
  }
  MESSAGE("top-1 " << top1 << "/" << n << ", top-3 " << top3 << "/" << n);
  CHECK(top3 >= n * 9 / 10);
}

TEST_CASE("worked example retrace is the cheapest cover of its spur") {
  const auto s = fixtures::worked_example();
  const auto cands = reconstruct(s.glyph);
  REQUIRE(!cands.empty());
  CHECK(cands.front().breakdown.pen_ups == 0);
  CHECK(cands.front().breakdown.retrace_length > 0);
}

TEST_CASE("beam search beyond the exhaustive limit") {
  Glyph g;
  g.id = "zigzag";
  for (int i = 0; i < 14; ++i)
    g.segments.push_back(Spline::line(Point(i * 0.5, (i % 2) ? 0.0 : 1.0), Point((i + 1) * 0.5, (i % 2) ? 1.0 : 0.0)));
  ReconstructionConfig cfg;
  cfg.beam_width = 16;
  const auto cands = reconstruct(g, cfg);
  REQUIRE(!cands.empty());
  CHECK(cands.front().breakdown.pen_ups == 0);
  for (const auto& c : cands) CHECK(validate(g, c.trajectory).empty());
  // Narrow beams still produce a valid cover.
  cfg.beam_width = 1;
  CHECK(validate(g, reconstruct(g, cfg).front().trajectory).empty());
}

TEST_CASE("exhaustive budget falls back to the beam") {
  std::mt19937_64 rng(77);
  const auto s = fixtures::synthetic(rng, "g", 8);
  ReconstructionConfig cfg;
  cfg.exhaustive_node_budget = 10;
  const auto cands = reconstruct(s.glyph, cfg);
  REQUIRE(!cands.empty());
  CHECK(validate(s.glyph, cands.front().trajectory).empty());
}

TEST_CASE("select_trajectory") {
  const auto s = fixtures::l_shape();
  const auto cands = reconstruct(s.glyph);
  REQUIRE(cands.size() >= 3);
  const Trajectory t0 = select_trajectory(s.glyph, cands, 0);
  CHECK(t0.pen_strokes == cands[0].trajectory.pen_strokes);
  CHECK(t0.provenance == Provenance::reconstructed);
  CHECK(select_trajectory(s.glyph, cands, 2).pen_strokes == cands[2].trajectory.pen_strokes);
  CHECK_THROWS_AS(select_trajectory(s.glyph, cands, static_cast<int>(cands.size())), Error);
  CHECK_THROWS_AS(select_trajectory(s.glyph, cands, -1), Error);
}

TEST_CASE("invalid configuration") {
  const auto s = fixtures::l_shape();
  ReconstructionConfig cfg;
  cfg.max_candidates = 0;
  CHECK_THROWS_AS(reconstruct(s.glyph, cfg), Error);
  cfg = {};
  cfg.weights.turn_per_degree = -1;
  CHECK_THROWS_AS(reconstruct(s.glyph, cfg), Error);
}
