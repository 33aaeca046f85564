#include "glyphometrics/script_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "glyphometrics/parallel.hpp"

namespace glyphometrics {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * (sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

double entropy_of(const std::array<double, 8>& p) {
  double h = 0;
  for (double v : p)
    if (v > 0) h -= v * std::log(v);
  return std::max(0.0, h);
}

// Weighted mean of angles in degrees; null when the resultant vanishes.
Metric<double> circular_mean(const std::vector<std::pair<double, double>>& values) {
  double c = 0, s = 0;
  for (const auto& [v, w] : values) {
    c += w * std::cos(v * std::numbers::pi / 180);
    s += w * std::sin(v * std::numbers::pi / 180);
  }
  if (std::hypot(c, s) <= 1e-12) return Metric<double>::null("angles cancel out; no mean direction");
  return Metric<double>::of(wrap_deg(std::atan2(s, c) * 180 / std::numbers::pi));
}

}  // namespace

Histogram fixed_histogram(const std::vector<double>& values, double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw Error(ErrorCode::invalid_input, "histogram needs bins >= 1 and hi > lo");
  Histogram h;
  for (int i = 0; i <= bins; ++i) h.edges.push_back(lo + (hi - lo) * i / bins);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    const int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    ++h.counts[std::clamp(b, 0, bins - 1)];
  }
  return h;
}

Histogram freedman_diaconis(std::vector<double> values, int min_bins, int max_bins) {
  if (min_bins < 1 || max_bins < min_bins) throw Error(ErrorCode::invalid_input, "bad histogram bin limits");
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  const double lo = values.front(), hi = values.back();
  if (!(hi > lo)) return fixed_histogram(values, lo - 0.5, hi + 0.5, min_bins);
  const double iqr = quantile(values, 0.75) - quantile(values, 0.25);
  int bins = min_bins;
  if (iqr > 0) {
    const double width = 2 * iqr / std::cbrt(static_cast<double>(values.size()));
    bins = static_cast<int>(std::clamp(std::ceil((hi - lo) / width), double(min_bins), double(max_bins)));
  }
  return fixed_histogram(values, lo, hi, bins);
}

bool is_angle_field(const std::string& name) {
  return name == "major_angle_deg" || name == "initial_angle_deg" || name == "divergence_angle_deg";
}

ScriptMetrics aggregate(const ScriptCorpus& corpus, const std::vector<MetricRecord>& records, Weighting weighting) {
  if (corpus.glyphs.empty() || records.empty()) throw Error(ErrorCode::invalid_input, "cannot aggregate an empty corpus");
  ScriptMetrics out;
  out.script_id = corpus.id;
  for (const auto& r : records) {
    if (!corpus.find(r.glyph_id))
      throw Error(ErrorCode::referential_integrity, "record for unknown glyph '" + r.glyph_id + "'");
    if (!out.per_glyph.emplace(r.glyph_id, r).second)
      throw Error(ErrorCode::invalid_input, "two records for glyph '" + r.glyph_id + "'");
  }

  // field -> (value, frequency weight) over non-null values
  std::map<std::string, std::vector<std::pair<double, double>>> columns;
  std::vector<double> stroke_lengths;
  for (const auto& [id, r] : out.per_glyph) {
    const Glyph* g = corpus.find(id);
    const double w = g->usage_frequency.value_or(1.0);
    for (const auto& [name, m] : scalar_fields(r)) {
      auto& col = columns[name];
      if (m.has_value()) col.emplace_back(*m, w);
    }
    stroke_lengths.insert(stroke_lengths.end(), r.stroke_length_list.begin(), r.stroke_length_list.end());
  }

  const auto mean = [](const std::string& name, const std::vector<std::pair<double, double>>& col, bool weighted) {
    if (col.empty()) return Metric<double>::null("no glyph has a value for " + name);
    std::vector<std::pair<double, double>> use = col;
    if (!weighted)
      for (auto& [v, w] : use) w = 1.0;
    if (is_angle_field(name)) return circular_mean(use);
    double sum = 0, total = 0;
    for (const auto& [v, w] : use) {
      sum += v * w;
      total += w;
    }
    if (!(total > 0)) return Metric<double>::null("usage frequencies of glyphs with " + name + " sum to zero");
    return Metric<double>::of(sum / total);
  };

  for (const auto& [name, col] : columns) {
    out.means[name] = mean(name, col, weighting == Weighting::frequency);
    out.weighted_means[name] = mean(name, col, true);
    std::vector<double> vals;
    for (const auto& [v, w] : col) vals.push_back(v);
    if (!vals.empty()) out.histograms[name] = freedman_diaconis(vals);
  }
  if (!stroke_lengths.empty()) out.histograms["stroke_length_list"] = freedman_diaconis(stroke_lengths);
  return out;
}

BigramModel build_bigram_model(const std::vector<std::vector<DirectionCode>>& sequences, Smoothing smoothing) {
  std::array<double, 8> uni{};
  std::array<std::array<double, 8>, 8> pair{};
  BigramModel m;
  m.smoothing = smoothing;
  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const int a = static_cast<int>(seq[i]);
      const int b = static_cast<int>(seq[(i + 1) % seq.size()]);
      uni[a] += 1;
      pair[a][b] += 1;
      ++m.symbols;
      ++m.pairs;
    }
  }
  if (m.symbols == 0) throw Error(ErrorCode::invalid_input, "no visible strokes to build a bigram model from");

  const double extra = smoothing == Smoothing::add_one ? 1.0 : 0.0;
  for (int a = 0; a < 8; ++a) {
    m.unigram[a] = (uni[a] + extra) / (m.symbols + 8 * extra);
    const double row = uni[a] + 8 * extra;
    m.row_defined[a] = row > 0;
    for (int b = 0; b < 8; ++b) {
      m.joint[a][b] = (pair[a][b] + extra) / (m.pairs + 64 * extra);
      m.conditional[a][b] = row > 0 ? (pair[a][b] + extra) / row : 0.0;
    }
  }
  m.unigram_entropy_nats = entropy_of(m.unigram);
  double h = 0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const double p = m.conditional[a][b];
      if (p > 0) h -= m.unigram[a] * p * std::log(p);
    }
  m.conditional_entropy_nats = std::max(0.0, h);
  return m;
}

SimilarityMatrix similarity_matrix(const ScriptCorpus& corpus, const std::map<std::string, Trajectory>& trajectories,
                                   DistinctivityMode mode, int resample, int threads) {
  const int n = static_cast<int>(corpus.glyphs.size());
  if (n < 2) throw Error(ErrorCode::invalid_input, "a similarity matrix needs at least 2 glyphs");
  SimilarityMatrix sm;
  std::vector<std::optional<Eigen::MatrixX2d>> profiles(n);
  std::vector<std::string> reasons(n);
  for (const auto& g : corpus.glyphs) sm.glyph_ids.push_back(g.id);

  parallel_for(n, threads, [&](int i) {
    const Glyph& g = corpus.glyphs[i];
    const auto it = trajectories.find(g.id);
    const Trajectory* t = it == trajectories.end() ? nullptr : &it->second;
    try {
      profiles[i] = distinctivity_profile(g, t, mode, resample);
    } catch (const Error& e) {
      reasons[i] = e.what();
    }
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  sm.values = Eigen::MatrixXd::Constant(n, n, nan);
  for (int i = 0; i < n; ++i) {
    if (!profiles[i]) {
      sm.flagged[sm.glyph_ids[i]] = reasons[i];
      continue;
    }
    sm.values(i, i) = 0.0;
  }
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (profiles[i] && profiles[j]) cells.emplace_back(i, j);
  parallel_for(static_cast<int>(cells.size()), threads, [&](int c) {
    const auto [i, j] = cells[c];
    const double d = distinctivity(*profiles[i], *profiles[j]);
    sm.values(i, j) = d;
    sm.values(j, i) = d;
  });
  return sm;
}

ParallelCoordinates export_parallel_coordinates(const std::vector<ScriptMetrics>& scripts,
                                                const std::vector<std::string>& fields, bool include_glyph_rows) {
  if (scripts.empty()) throw Error(ErrorCode::invalid_input, "parallel coordinates need at least one script");
  if (fields.empty()) throw Error(ErrorCode::invalid_input, "parallel coordinates need at least one field");

  ParallelCoordinates pc;
  const auto value_of = [](const std::map<std::string, Metric<double>>& m, const std::string& f) {
    const auto it = m.find(f);
    return it != m.end() && it->second.has_value() ? std::optional<double>(*it->second) : std::nullopt;
  };

  std::vector<ParallelCoordinates::Row> rows;
  std::vector<std::map<std::string, Metric<double>>> sources;
  for (const auto& s : scripts) {
    rows.push_back({s.script_id, std::nullopt, {}, {}});
    sources.push_back(s.means);
    if (!include_glyph_rows) continue;
    for (const auto& [id, r] : s.per_glyph) {
      rows.push_back({s.script_id, id, {}, {}});
      sources.push_back(scalar_fields(r));
    }
  }

  for (const auto& f : fields) {
    std::vector<std::optional<double>> col;
    for (const auto& src : sources) col.push_back(value_of(src, f));
    if (std::none_of(col.begin(), col.end(), [](const auto& v) { return v.has_value(); })) {
      pc.warnings.push_back("field '" + f + "' has no values and was dropped");
      continue;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : col)
      if (v) {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
    pc.fields.push_back(f);
    pc.bounds.emplace_back(lo, hi);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      rows[r].raw.push_back(col[r]);
      if (!col[r]) {
        rows[r].normalized.push_back(std::nullopt);
      } else {
        rows[r].normalized.push_back(hi > lo ? (*col[r] - lo) / (hi - lo) : 0.5);
      }
    }
  }
  pc.rows = std::move(rows);
  return pc;
}

DirectionSummary direction_summary(const std::vector<MetricRecord>& records) {
  DirectionSummary d;
  for (const auto& r : records) {
    if (!r.angles.major_angle_deg.has_value() || !r.angles.initial_angle_deg.has_value()) {
      d.warnings.push_back("glyph '" + r.glyph_id + "' has no visible strokes and was skipped");
      continue;
    }
    ++d.major[static_cast<int>(quantize_angle(*r.angles.major_angle_deg))];
    ++d.initial[static_cast<int>(quantize_angle(*r.angles.initial_angle_deg))];
    ++d.glyphs;
  }
  const auto modal = [](const std::array<int, 8>& counts) -> std::optional<DirectionCode> {
    const auto it = std::max_element(counts.begin(), counts.end());
    if (*it == 0) return std::nullopt;
    return static_cast<DirectionCode>(it - counts.begin());
  };
  d.modal_major = modal(d.major);
  d.modal_initial = modal(d.initial);
  return d;
}

}  // namespace glyphometrics
