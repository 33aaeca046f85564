#pragma once

// Minimum trajectory score by dynamic programming over (covered set, last
// pass). Shares only the graph and tangent primitives with the library; the
// search itself is independent of the reconstructor.

#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "glyphometrics/reconstruction.hpp"

namespace oracle {

using namespace glyphometrics;

class MinScore {
 public:
  MinScore(const Glyph& g, const ReconstructionWeights& w) : g_(g), w_(w), graph_(build_segment_graph(g)) {
    diag_ = bounding_box(g).diagonal();
    const int n = static_cast<int>(graph_.edges.size());
    for (int e = 0; e < n; ++e) {
      const Spline& s = g.segments[graph_.edges[e].segment];
      start_[e][0] = unit_tangent(s, 0.0);
      end_[e][0] = unit_tangent(s, 1.0);
      start_[e][1] = -end_[e][0];
      end_[e][1] = -start_[e][0];
      from_[e][0] = graph_.edges[e].from;
      from_[e][1] = graph_.edges[e].to;
      length_[e] = arc_length(s);
    }
    full_ = (1u << n) - 1;
  }

  double solve() {
    double best = std::numeric_limits<double>::infinity();
    for (int e = 0; e < static_cast<int>(graph_.edges.size()); ++e)
      for (int r = 0; r < 2; ++r) best = std::min(best, w_.start_prior * prior(0, e, r) + after(1u << e, e, r, false));
    return best;
  }

 private:
  const Glyph& g_;
  ReconstructionWeights w_;
  SegmentGraph graph_;
  double diag_ = 1;
  std::map<int, std::array<Point, 2>> start_, end_;
  std::map<int, std::array<int, 2>> from_;
  std::map<int, double> length_;
  unsigned full_ = 0;
  std::map<std::tuple<unsigned, int, int, bool>, double> memo_;

  int to(int e, int r) const { return from_.at(e)[1 - r]; }

  double prior(unsigned covered, int e, int r) const {
    int best = -1;
    for (int k = 0; k < static_cast<int>(graph_.edges.size()); ++k) {
      if (covered & (1u << k)) continue;
      for (int v : {graph_.edges[k].from, graph_.edges[k].to}) {
        if (best < 0) {
          best = v;
          continue;
        }
        const Point& p = graph_.nodes[v];
        const Point& q = graph_.nodes[best];
        if (p.y() > q.y() || (p.y() == q.y() && p.x() < q.x())) best = v;
      }
    }
    const double a = (graph_.nodes[from_.at(e)[r]] - graph_.nodes[best]).norm() / diag_;
    const Point& u = start_.at(e)[r];
    return a + (std::max(0.0, u.y()) + std::max(0.0, -u.x())) / 2;
  }

  // Cheapest completion after pass (e, r); `retraced` when that pass was a retrace.
  double after(unsigned covered, int e, int r, bool retraced) {
    if (covered == full_) return 0;
    const auto key = std::make_tuple(covered, e, r, retraced);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double best = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(graph_.edges.size());
    const int here = to(e, r);
    for (int k = 0; k < n; ++k) {
      if (covered & (1u << k)) continue;
      for (int kr = 0; kr < 2; ++kr) {
        const unsigned next = covered | (1u << k);
        if (from_.at(k)[kr] == here) {
          const double turn = turn_angle_deg(end_.at(e)[r], start_.at(k)[kr]);
          best = std::min(best, w_.turn_per_degree * turn + after(next, k, kr, false));
        }
        best = std::min(best, w_.pen_up + w_.start_prior * prior(covered, k, kr) + after(next, k, kr, false));
      }
    }
    if (!retraced) best = std::min(best, w_.retrace_per_length * length_.at(e) / diag_ + after(covered, e, 1 - r, true));
    memo_[key] = best;
    return best;
  }
};

}  // namespace oracle
