#pragma once

#include <vector>

#include "glyphometrics/glyph.hpp"

namespace glyphometrics {

/// Segment endpoints merged into nodes (within the coincidence tolerance);
/// one edge per glyph segment.
struct SegmentGraph {
  struct Edge {
    int segment = 0;
    int from = 0;  // node at the segment's start
    int to = 0;    // node at the segment's end
    double length = 0;
  };

  std::vector<Point> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adjacency;  // node -> incident edge indices (self-loops listed once)

  int degree(int node) const;  // self-loops count twice
};

SegmentGraph build_segment_graph(const Glyph& g);

struct ReconstructionWeights {
  double pen_up = 10.0;
  double turn_per_degree = 0.02;
  double retrace_per_length = 5.0;  // per unit of glyph diagonal
  double start_prior = 1.0;
};

struct ReconstructionConfig {
  ReconstructionWeights weights;
  int max_candidates = 5;
  int beam_width = 64;
  int exhaustive_segment_limit = 10;
  // Node budget for exhaustive search; beyond it the search continues as a beam.
  long long exhaustive_node_budget = 4'000'000;
};

/// Unweighted cost components; the score is their weighted sum.
struct ScoreBreakdown {
  double pen_ups = 0;        // count
  double turn_degrees = 0;   // summed junction turns, retrace reversals excluded
  double retrace_length = 0; // retraced length over glyph diagonal
  double start_prior = 0;    // summed over every pen-down

  double weighted(const ReconstructionWeights& w) const {
    return w.pen_up * pen_ups + w.turn_per_degree * turn_degrees + w.retrace_per_length * retrace_length +
           w.start_prior * start_prior;
  }
};

struct CandidateTrajectory {
  Trajectory trajectory;
  double score = 0;
  ScoreBreakdown breakdown;
};

/// Cost components of an arbitrary valid trajectory under the reconstruction model.
ScoreBreakdown score_trajectory(const Glyph& g, const Trajectory& t);

/// Ranked candidate trajectories, best first. Exhaustive branch-and-bound up to
/// `exhaustive_segment_limit` segments, beam search beyond.
std::vector<CandidateTrajectory> reconstruct(const Glyph& g, const ReconstructionConfig& cfg = {});

/// The chosen candidate, re-validated, marked reconstructed.
Trajectory select_trajectory(const Glyph& g, const std::vector<CandidateTrajectory>& candidates, int choice);

}  // namespace glyphometrics
