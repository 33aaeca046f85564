#include "glyphometrics/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace glyphometrics {

int SegmentGraph::degree(int node) const {
  int d = 0;
  for (int e : adjacency[node]) d += edges[e].from == edges[e].to ? 2 : 1;
  return d;
}

SegmentGraph build_segment_graph(const Glyph& g) {
  if (g.segments.empty()) throw Error(ErrorCode::invalid_input, "glyph '" + g.id + "' has no segments");
  const double tol = coincidence_tolerance(g);
  const int n = static_cast<int>(g.segments.size());
  std::vector<Point> ends;
  for (const auto& s : g.segments) {
    ends.push_back(s.start());
    ends.push_back(s.end());
  }
  std::vector<int> parent(ends.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto root = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < ends.size(); ++i)
    for (std::size_t j = i + 1; j < ends.size(); ++j)
      if ((ends[i] - ends[j]).norm() <= tol) {
        const int a = root(static_cast<int>(i)), b = root(static_cast<int>(j));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  SegmentGraph graph;
  std::vector<int> node_of(ends.size(), -1), node_of_root(ends.size(), -1);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    const int r = root(static_cast<int>(i));
    if (node_of_root[r] < 0) {
      node_of_root[r] = static_cast<int>(graph.nodes.size());
      graph.nodes.push_back(ends[r]);
    }
    node_of[i] = node_of_root[r];
  }
  graph.adjacency.resize(graph.nodes.size());
  for (int s = 0; s < n; ++s) {
    SegmentGraph::Edge e{s, node_of[2 * s], node_of[2 * s + 1], arc_length(g.segments[s])};
    graph.edges.push_back(e);
    graph.adjacency[e.from].push_back(s);
    if (e.to != e.from) graph.adjacency[e.to].push_back(s);
  }
  return graph;
}

namespace {

// Geometry of each directed pass, precomputed once per glyph.
struct PassGeometry {
  int start_node, end_node;
  Point start_dir, end_dir;  // unit tangents leaving the start / arriving at the end
};

struct Model {
  const Glyph& glyph;
  SegmentGraph graph;
  std::vector<std::array<PassGeometry, 2>> pass;  // [edge][reversed]
  double diag;

  explicit Model(const Glyph& g) : glyph(g), graph(build_segment_graph(g)) {
    diag = bounding_box(g).diagonal();
    if (!(diag > 0)) throw Error(ErrorCode::degenerate_glyph, "glyph '" + g.id + "' has a zero-diagonal bounding box");
    for (const auto& e : graph.edges) {
      const Spline& s = g.segments[e.segment];
      const Point t0 = unit_tangent(s, 0.0), t1 = unit_tangent(s, 1.0);
      pass.push_back({PassGeometry{e.from, e.to, t0, t1}, PassGeometry{e.to, e.from, -t1, -t0}});
    }
  }

  const PassGeometry& geo(const Pass& p) const { return pass[p.segment][p.reversed ? 1 : 0]; }

  // Node with the highest y (then lowest x) among endpoints of uncovered edges.
  int top_left(const std::vector<char>& covered) const {
    int best = -1;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      if (covered[e]) continue;
      for (int v : {graph.edges[e].from, graph.edges[e].to}) {
        if (best < 0) {
          best = v;
          continue;
        }
        const Point& p = graph.nodes[v];
        const Point& q = graph.nodes[best];
        if (p.y() > q.y() || (p.y() == q.y() && p.x() < q.x())) best = v;
      }
    }
    return best;
  }

  double start_prior(const std::vector<char>& covered, const Pass& first) const {
    const PassGeometry& pg = geo(first);
    const int tl = top_left(covered);
    const double a = (graph.nodes[pg.start_node] - graph.nodes[tl]).norm() / diag;
    const Point& u = pg.start_dir;
    const double b = (std::max(0.0, u.y()) + std::max(0.0, -u.x())) / 2;
    return a + b;
  }

  // Lower bound on further pen-ups: every component of uncovered edges needs
  // its own pen-down, except one touching the current node.
  int remaining_pen_ups(const std::vector<char>& covered, int current) const {
    const int nn = static_cast<int>(graph.nodes.size());
    std::vector<int> parent(nn);
    std::iota(parent.begin(), parent.end(), 0);
    const auto root = [&](int i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    std::vector<char> used(nn, 0);
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      if (covered[e]) continue;
      const int a = root(graph.edges[e].from), b = root(graph.edges[e].to);
      used[graph.edges[e].from] = used[graph.edges[e].to] = 1;
      if (a != b) parent[a] = b;
    }
    int components = 0;
    bool touches = false;
    for (int v = 0; v < nn; ++v) {
      if (!used[v]) continue;
      if (root(v) == v) ++components;
    }
    if (current >= 0 && used[current]) touches = true;
    return std::max(0, components - (touches ? 1 : 0));
  }
};

struct State {
  Trajectory traj;
  std::vector<char> covered;
  int covered_count = 0;
  ScoreBreakdown cost;
  int node = -1;  // pen position, -1 before the first pen-down
  bool can_retrace = false;
};

struct Move {
  bool lift = false;
  bool retrace_first = false;
  Pass pass;
};

double turn(const Point& a, const Point& b) { return turn_angle_deg(a, b); }

// Every extension of `s` covering exactly one more edge, in a fixed order.
std::vector<Move> moves(const Model& m, const State& s) {
  std::vector<Move> out;
  const auto& g = m.graph;
  const auto directions = [&](int e, int at, auto emit) {
    for (bool rev : {false, true}) {
      const PassGeometry& pg = m.pass[e][rev ? 1 : 0];
      if (at >= 0 && pg.start_node != at) continue;
      emit(Pass{g.edges[e].segment, rev, false});
    }
  };
  if (s.node >= 0) {
    if (s.can_retrace) {
      const Pass& last = s.traj.pen_strokes.back().path.back();
      const int back_at = m.geo(last).start_node;
      for (int e : g.adjacency[back_at])
        if (!s.covered[e]) directions(e, back_at, [&](Pass p) { out.push_back({false, true, p}); });
    }
    for (int e : g.adjacency[s.node])
      if (!s.covered[e]) directions(e, s.node, [&](Pass p) { out.push_back({false, false, p}); });
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (s.covered[e]) continue;
    directions(static_cast<int>(e), -1, [&](Pass p) {
      if (s.node >= 0 && m.geo(p).start_node == s.node) return;  // would be a zero-length pen-drag
      out.push_back({true, false, p});
    });
  }
  return out;
}

State apply(const Model& m, const State& s, const Move& mv) {
  State n = s;
  if (s.node < 0 || mv.lift) {
    if (s.node >= 0) n.cost.pen_ups += 1;
    n.cost.start_prior += m.start_prior(s.covered, mv.pass);
    n.traj.pen_strokes.push_back({});
  } else {
    auto& path = n.traj.pen_strokes.back().path;
    Point incoming = m.geo(path.back()).end_dir;
    if (mv.retrace_first) {
      const Pass last = path.back();
      const Pass back{last.segment, !last.reversed, true};
      path.push_back(back);
      n.cost.retrace_length += m.graph.edges[last.segment].length / m.diag;
      incoming = m.geo(back).end_dir;
    }
    n.cost.turn_degrees += turn(incoming, m.geo(mv.pass).start_dir);
  }
  n.traj.pen_strokes.back().path.push_back(mv.pass);
  n.covered[mv.pass.segment] = 1;
  ++n.covered_count;
  n.node = m.geo(mv.pass).end_node;
  n.can_retrace = true;
  return n;
}

// Total order used for ranking and for deterministic beams.
struct RankKey {
  long long score_q;
  int pen_ups;
  double neg_y, x;
  std::vector<std::tuple<int, int, int, int>> passes;  // (stroke, segment, reversed, retrace)

  auto operator<=>(const RankKey&) const = default;
};

RankKey rank_key(const Model& m, const Trajectory& t, double score) {
  RankKey k;
  k.score_q = std::llround(score * 1e9);
  k.pen_ups = pen_up_count(t);
  const Point first = t.pen_strokes.empty() ? Point::Zero() : pen_stroke_start(m.glyph, t.pen_strokes.front());
  k.neg_y = -first.y();
  k.x = first.x();
  for (std::size_t i = 0; i < t.pen_strokes.size(); ++i)
    for (const auto& p : t.pen_strokes[i].path)
      k.passes.emplace_back(static_cast<int>(i), p.segment, p.reversed, p.retrace);
  return k;
}

struct Ranked {
  RankKey key;
  CandidateTrajectory cand;
};

class TopK {
 public:
  TopK(const Model& m, const ReconstructionWeights& w, std::size_t k) : m_(m), w_(w), k_(k) {}

  void offer(const State& s) {
    const double score = s.cost.weighted(w_);
    Ranked r{rank_key(m_, s.traj, score), {s.traj, score, s.cost}};
    for (const auto& have : items_)
      if (have.cand.trajectory == r.cand.trajectory) return;
    const auto pos = std::upper_bound(items_.begin(), items_.end(), r,
                                      [](const Ranked& a, const Ranked& b) { return a.key < b.key; });
    items_.insert(pos, std::move(r));
    if (items_.size() > k_) items_.pop_back();
  }

  // Partial states scoring above this cannot enter the list.
  double bound() const {
    return items_.size() < k_ ? std::numeric_limits<double>::infinity() : items_.back().cand.score + 1e-9;
  }

  std::vector<CandidateTrajectory> take() {
    std::vector<CandidateTrajectory> out;
    for (auto& r : items_) out.push_back(std::move(r.cand));
    return out;
  }

 private:
  const Model& m_;
  const ReconstructionWeights& w_;
  std::size_t k_;
  std::vector<Ranked> items_;
};

class Exhaustive {
 public:
  Exhaustive(const Model& m, const ReconstructionWeights& w, TopK& top, long long budget)
      : m_(m), w_(w), top_(top), budget_(budget) {}

  // False when the node budget ran out before the search space was closed.
  bool run(const State& root) {
    visit(root);
    return !exhausted_;
  }

 private:
  const Model& m_;
  const ReconstructionWeights& w_;
  TopK& top_;
  long long budget_;
  long long nodes_ = 0;
  bool exhausted_ = false;

  void visit(const State& s) {
    if (exhausted_) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    if (s.covered_count == static_cast<int>(m_.graph.edges.size())) {
      top_.offer(s);
      return;
    }
    const double lb = w_.pen_up * m_.remaining_pen_ups(s.covered, s.node);
    if (s.cost.weighted(w_) + lb > top_.bound()) return;
    for (const Move& mv : moves(m_, s)) {
      State next = apply(m_, s, mv);
      if (next.cost.weighted(w_) > top_.bound()) continue;
      visit(next);
    }
  }
};

void beam_search(const Model& m, const ReconstructionWeights& w, int width, const State& root, TopK& top) {
  std::vector<State> beam = {root};
  const int total = static_cast<int>(m.graph.edges.size());
  for (int level = 0; level < total && !beam.empty(); ++level) {
    std::vector<std::pair<RankKey, State>> next;
    for (const State& s : beam) {
      for (const Move& mv : moves(m, s)) {
        State n = apply(m, s, mv);
        const double priority = n.cost.weighted(w) + w.pen_up * m.remaining_pen_ups(n.covered, n.node);
        next.emplace_back(rank_key(m, n.traj, priority), std::move(n));
      }
    }
    std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (static_cast<int>(next.size()) > width) next.resize(width);
    beam.clear();
    for (auto& [key, s] : next) beam.push_back(std::move(s));
  }
  for (const State& s : beam)
    if (s.covered_count == total) top.offer(s);
}

}  // namespace

ScoreBreakdown score_trajectory(const Glyph& g, const Trajectory& t) {
  require_valid(g, t);
  const Model m(g);
  ScoreBreakdown cost;
  std::vector<char> covered(m.graph.edges.size(), 0);
  cost.pen_ups = pen_up_count(t);
  for (const auto& stroke : t.pen_strokes) {
    cost.start_prior += m.start_prior(covered, stroke.path.front());
    for (std::size_t i = 0; i < stroke.path.size(); ++i) {
      const Pass& p = stroke.path[i];
      if (p.retrace) {
        cost.retrace_length += m.graph.edges[p.segment].length / m.diag;
      } else {
        covered[p.segment] = 1;
      }
      if (i + 1 < stroke.path.size() && !stroke.path[i + 1].retrace)
        cost.turn_degrees += turn(m.geo(p).end_dir, m.geo(stroke.path[i + 1]).start_dir);
    }
  }
  return cost;
}

std::vector<CandidateTrajectory> reconstruct(const Glyph& g, const ReconstructionConfig& cfg) {
  if (const auto issues = validate(g); !issues.empty())
    throw Error(ErrorCode::invalid_input, "cannot reconstruct invalid glyph '" + g.id + "': " + issues.front());
  if (cfg.max_candidates < 1) throw Error(ErrorCode::invalid_input, "max_candidates must be >= 1");
  if (cfg.beam_width < 1) throw Error(ErrorCode::invalid_input, "beam_width must be >= 1");
  const auto& w = cfg.weights;
  for (double v : {w.pen_up, w.turn_per_degree, w.retrace_per_length, w.start_prior})
    if (!(v >= 0) || !std::isfinite(v)) throw Error(ErrorCode::invalid_input, "weights must be finite and >= 0");

  const Model m(g);
  State root;
  root.traj.glyph_id = g.id;
  root.traj.provenance = Provenance::reconstructed;
  root.covered.assign(m.graph.edges.size(), 0);

  TopK top(m, w, static_cast<std::size_t>(cfg.max_candidates));
  bool complete = false;
  if (static_cast<int>(m.graph.edges.size()) <= cfg.exhaustive_segment_limit) {
    Exhaustive search(m, w, top, cfg.exhaustive_node_budget);
    complete = search.run(root);
  }
  if (!complete) beam_search(m, w, cfg.beam_width, root, top);

  auto out = top.take();
  if (out.empty()) throw Error(ErrorCode::reconstruction_failed, "no traversal found for glyph '" + g.id + "'");
  return out;
}

Trajectory select_trajectory(const Glyph& g, const std::vector<CandidateTrajectory>& candidates, int choice) {
  if (choice < 0 || choice >= static_cast<int>(candidates.size()))
    throw Error(ErrorCode::invalid_input, "candidate index " + std::to_string(choice) + " out of range (" +
                                              std::to_string(candidates.size()) + " candidates)");
  Trajectory t = candidates[choice].trajectory;
  t.glyph_id = g.id;
  t.provenance = Provenance::reconstructed;
  require_valid(g, t);
  return t;
}

}  // namespace glyphometrics
