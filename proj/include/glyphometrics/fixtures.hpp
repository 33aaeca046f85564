#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "glyphometrics/corpus_io.hpp"
#include "glyphometrics/glyph.hpp"

namespace glyphometrics::fixtures {

struct Sample {
  Glyph glyph;
  Trajectory trajectory;
};

/// Hooked character written in one pen stroke: an upstroke to a junction, a
/// short bar to the right that is immediately retraced, then a winding tail
/// with four bends. Strokes quantize to N E W S NW SE SW S.
Sample worked_example();

/// One cubic segment with two rounded bends (a "Z" written with curves).
Sample s_curve();

Sample straight(const Point& a, const Point& b);
Sample l_shape();                       // down then right, one pen stroke
Sample two_strokes(const Point& a0, const Point& a1, const Point& b0, const Point& b1);
Sample circle(double r, const Point& center = Point::Zero(), int control_points = 32);
Sample square(double side);             // outline from the top-left corner, clockwise

/// Closed uniform cubic approximating a circle; the parameter domain starts at
/// angle 2*pi/n.
Spline circle_spline(const Point& center, double r, int n = 32);

/// Random glyph generated together with the trajectory that drew it. Chains,
/// loops and retraced spurs in one or two pen strokes; each pen stroke starts
/// at its topmost node heading down or right. At most `max_segments` segments.
Sample synthetic(std::mt19937_64& rng, const std::string& id, int max_segments = 8);

struct SyntheticScript {
  ScriptCorpus corpus;
  std::map<std::string, Trajectory> trajectories;
};

/// One of three stylistic stages (0, 1, 2) of an invented script, `glyphs`
/// characters each, deterministic in `seed`.
SyntheticScript synthetic_script(int stage, int glyphs, std::uint64_t seed);

/// Fixture names accepted by document(): worked_example, s_curve, basic,
/// stage-early, stage-middle, stage-late.
const std::vector<std::string>& document_names();

/// A bundled fixture as a corpus document. Synthetic stages have `glyphs`
/// characters; their generating trajectories are stored (provenance recorded)
/// unless `with_trajectories` is false.
CorpusDocument document(const std::string& name, int glyphs = 50, bool with_trajectories = true);

}  // namespace glyphometrics::fixtures
