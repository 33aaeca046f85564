#include "glyphometrics/corpus_io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace glyphometrics {

double canonical_float(double x) {
  if (!std::isfinite(x)) return x;
  const double r = std::round(x * 1e9) / 1e9;
  return r == 0 ? 0.0 : r;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp-" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::io_error, "write to '" + path.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::io_error, "cannot replace '" + path.string() + "'");
  }
}

namespace jsonio {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::parse_error, "at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

const json* optional_member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) bad(where, "expected true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

json point(const Point& p) { return json::array({p.x(), p.y()}); }

json metric(const Metric<double>& m) { return m.has_value() ? json(*m) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

template <typename Parse>
auto enum_value(const json& j, const std::string& where, Parse parse) {
  const std::string s = string(j, where);
  try {
    return parse(s);
  } catch (const Error&) {
    bad(where, "unknown value \"" + s + "\"");
  }
}

json code_counts(const std::array<int, 8>& counts) {
  json out = json::object();
  for (auto c : kDirectionCodes) out[std::string(to_string(c))] = counts[static_cast<int>(c)];
  return out;
}

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string child(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

}  // namespace

json to_json(const Spline& s) {
  json cps = json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) cps.push_back(point(s.control_point(i)));
  json knots = json::array();
  for (Eigen::Index i = 0; i < s.knots().size(); ++i) knots.push_back(s.knots()(i));
  return {{"degree", s.degree()}, {"control_points", cps}, {"knots", knots}};
}

json to_json(const Glyph& g) {
  json segs = json::array();
  for (const auto& s : g.segments) segs.push_back(to_json(s));
  json out = {{"id", g.id}, {"script_id", g.script_id}, {"segments", segs}};
  if (g.baseline_y) out["baseline_y"] = *g.baseline_y;
  if (g.label) out["label"] = *g.label;
  if (g.usage_frequency) out["usage_frequency"] = *g.usage_frequency;
  return out;
}

json to_json(const Trajectory& t) {
  json strokes = json::array();
  for (const auto& ps : t.pen_strokes) {
    json path = json::array();
    for (const auto& p : ps.path)
      path.push_back({{"segment_index", p.segment}, {"reversed", p.reversed}, {"retrace", p.retrace}});
    strokes.push_back(path);
  }
  return {{"provenance", std::string(to_string(t.provenance))}, {"pen_strokes", strokes}};
}

json to_json(const LandmarkPoint& l) {
  return {{"location", point(l.location)},
          {"kind", std::string(to_string(l.kind))},
          {"source", std::string(to_string(l.source))},
          {"position", {{"pen_stroke", l.position.pen_stroke}, {"pass", l.position.pass}, {"t", l.position.t}}}};
}

json to_json(const ScoreBreakdown& b) {
  return {{"pen_ups", b.pen_ups},
          {"turn_degrees", b.turn_degrees},
          {"retrace_length", b.retrace_length},
          {"start_prior", b.start_prior}};
}

json to_json(const CandidateTrajectory& c) {
  return {{"score", c.score}, {"breakdown", to_json(c.breakdown)}, {"trajectory", to_json(c.trajectory)}};
}

json to_json(const SegmentationResult& seg) {
  json lms = json::array();
  for (const auto& l : seg.landmarks) lms.push_back(to_json(l));
  json strokes = json::array();
  for (const auto& s : seg.strokes) {
    json js = {{"index", s.index},
               {"visible", s.visible},
               {"start", point(s.start)},
               {"end", point(s.end)},
               {"length", s.length},
               {"net_angle_deg", s.net_angle}};
    if (s.visible) {
      js["pen_stroke"] = s.pen_stroke;
      js["direction"] = std::string(to_string(s.direction));
      js["updown"] = std::string(to_string(s.updown));
    }
    strokes.push_back(js);
  }
  json codes = json::array();
  for (auto c : seg.stroke_inventory_key) codes.push_back(std::string(to_string(c)));
  json retraces = json::array();
  for (const auto& r : seg.retraces) retraces.push_back(json::array({r.first, r.second}));
  return {{"landmarks", lms}, {"strokes", strokes}, {"direction_codes", codes}, {"retraces", retraces}};
}

json to_json(const MetricRecord& r) {
  json metrics = json::object();
  json reasons = json::object();
  for (const auto& [name, m] : scalar_fields(r)) {
    metrics[name] = metric(m);
    if (!m.has_value()) reasons[name] = m.reason;
  }
  json lists = json::object();
  for (const auto& [name, v] : list_fields(r)) lists[name] = v;
  return {{"glyph_id", r.glyph_id}, {"metrics", metrics}, {"lists", lists}, {"null_reasons", reasons}};
}

json to_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

json to_json(const ScriptMetrics& m) {
  json means = json::object(), weighted = json::object(), hist = json::object();
  for (const auto& [k, v] : m.means) means[k] = metric(v);
  for (const auto& [k, v] : m.weighted_means) weighted[k] = metric(v);
  for (const auto& [k, v] : m.histograms) hist[k] = to_json(v);
  json glyphs = json::array();
  for (const auto& [id, r] : m.per_glyph) glyphs.push_back(id);
  return {{"script_id", m.script_id},
          {"glyphs", glyphs},
          {"means", means},
          {"weighted_means", weighted},
          {"histograms", hist}};
}

json to_json(const SimilarityMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.values.cols(); ++j)
      row.push_back(std::isnan(m.values(i, j)) ? json(nullptr) : json(m.values(i, j)));
    rows.push_back(row);
  }
  return {{"glyph_ids", m.glyph_ids}, {"values", rows}, {"flagged", m.flagged}};
}

json to_json(const ParallelCoordinates& p) {
  json bounds = json::array();
  for (const auto& [lo, hi] : p.bounds) bounds.push_back(json::array({lo, hi}));
  json rows = json::array();
  for (const auto& r : p.rows) {
    json raw = json::array(), norm = json::array();
    for (const auto& v : r.raw) raw.push_back(optional_number(v));
    for (const auto& v : r.normalized) norm.push_back(optional_number(v));
    json jr = {{"script_id", r.script_id}, {"raw", raw}, {"normalized", norm}};
    jr["glyph_id"] = r.glyph_id ? json(*r.glyph_id) : json(nullptr);
    rows.push_back(jr);
  }
  return {{"fields", p.fields}, {"bounds", bounds}, {"rows", rows}, {"warnings", p.warnings}};
}

json to_json(const BigramModel& m) {
  json uni = json::object(), cond = json::object();
  for (auto a : kDirectionCodes) {
    const int i = static_cast<int>(a);
    uni[std::string(to_string(a))] = m.unigram[i];
    if (!m.row_defined[i]) continue;
    json row = json::object();
    for (auto b : kDirectionCodes) row[std::string(to_string(b))] = m.conditional[i][static_cast<int>(b)];
    cond[std::string(to_string(a))] = row;
  }
  return {{"smoothing", m.smoothing == Smoothing::add_one ? "add_one" : "none"},
          {"symbols", m.symbols},
          {"pairs", m.pairs},
          {"unigram", uni},
          {"conditional", cond},
          {"unigram_entropy_nats", m.unigram_entropy_nats},
          {"conditional_entropy_nats", m.conditional_entropy_nats}};
}

json to_json(const DirectionSummary& d) {
  const auto modal = [](const std::optional<DirectionCode>& c) {
    return c ? json(std::string(to_string(*c))) : json(nullptr);
  };
  return {{"glyphs", d.glyphs},
          {"major", code_counts(d.major)},
          {"initial", code_counts(d.initial)},
          {"modal_major", modal(d.modal_major)},
          {"modal_initial", modal(d.modal_initial)},
          {"warnings", d.warnings}};
}

json to_json(const CorpusDocument& doc) {
  json glyphs = json::array();
  for (const auto& g : doc.corpus.glyphs) glyphs.push_back(to_json(g));
  json corpus = {{"id", doc.corpus.id}, {"name", doc.corpus.name}, {"glyphs", glyphs}};
  if (doc.corpus.baseline_y) corpus["baseline_y"] = *doc.corpus.baseline_y;
  json trajectories = json::object(), candidates = json::object(), landmarks = json::object();
  for (const auto& [id, t] : doc.trajectories) trajectories[id] = to_json(t);
  for (const auto& [id, cs] : doc.candidates) {
    json list = json::array();
    for (const auto& c : cs) list.push_back(to_json(c));
    candidates[id] = list;
  }
  for (const auto& [id, ls] : doc.landmarks) {
    json list = json::array();
    for (const auto& l : ls) list.push_back(to_json(l));
    landmarks[id] = list;
  }
  return {{"format_version", doc.format_version},
          {"corpus", corpus},
          {"trajectories", trajectories},
          {"candidates", candidates},
          {"landmarks", landmarks}};
}

Point point_from_json(const json& j, const std::string& where) {
  array(j, where);
  if (j.size() != 2) bad(where, "expected [x, y]");
  return Point(number(j[0], child(where, 0)), number(j[1], child(where, 1)));
}

Glyph glyph_from_json(const json& j, const std::string& where) {
  Glyph g;
  g.id = string(member(j, "id", where), child(where, "id"));
  if (const json* s = optional_member(j, "script_id", where)) g.script_id = string(*s, child(where, "script_id"));
  if (const json* b = optional_member(j, "baseline_y", where)) g.baseline_y = number(*b, child(where, "baseline_y"));
  if (const json* l = optional_member(j, "label", where)) g.label = string(*l, child(where, "label"));
  if (const json* f = optional_member(j, "usage_frequency", where))
    g.usage_frequency = number(*f, child(where, "usage_frequency"));
  const std::string sw = child(where, "segments");
  const json& segs = array(member(j, "segments", where), sw);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string at = child(sw, i);
    const int degree = integer(member(segs[i], "degree", at), child(at, "degree"));
    const json& cps = array(member(segs[i], "control_points", at), child(at, "control_points"));
    const json& knots = array(member(segs[i], "knots", at), child(at, "knots"));
    Spline::ControlMatrix c(2, static_cast<Eigen::Index>(cps.size()));
    for (std::size_t k = 0; k < cps.size(); ++k)
      c.col(static_cast<Eigen::Index>(k)) = point_from_json(cps[k], child(child(at, "control_points"), k));
    Spline::KnotVector kv(static_cast<Eigen::Index>(knots.size()));
    for (std::size_t k = 0; k < knots.size(); ++k)
      kv(static_cast<Eigen::Index>(k)) = number(knots[k], child(child(at, "knots"), k));
    try {
      g.segments.emplace_back(degree, c, kv);
    } catch (const Error& e) {
      bad(at, e.what());
    }
  }
  return g;
}

Trajectory trajectory_from_json(const json& j, const std::string& glyph_id, const std::string& where) {
  Trajectory t;
  t.glyph_id = glyph_id;
  if (const json* p = optional_member(j, "provenance", where))
    t.provenance = enum_value(*p, child(where, "provenance"), provenance_from_string);
  const std::string sw = child(where, "pen_strokes");
  const json& strokes = array(member(j, "pen_strokes", where), sw);
  for (std::size_t i = 0; i < strokes.size(); ++i) {
    const std::string at = child(sw, i);
    PenStroke ps;
    const json& path = array(strokes[i], at);
    for (std::size_t k = 0; k < path.size(); ++k) {
      const std::string pw = child(at, k);
      Pass p;
      p.segment = integer(member(path[k], "segment_index", pw), child(pw, "segment_index"));
      if (const json* r = optional_member(path[k], "reversed", pw)) p.reversed = boolean(*r, child(pw, "reversed"));
      if (const json* r = optional_member(path[k], "retrace", pw)) p.retrace = boolean(*r, child(pw, "retrace"));
      ps.path.push_back(p);
    }
    t.pen_strokes.push_back(std::move(ps));
  }
  return t;
}

LandmarkPoint landmark_from_json(const json& j, const std::string& where) {
  LandmarkPoint l;
  l.location = point_from_json(member(j, "location", where), child(where, "location"));
  l.kind = enum_value(member(j, "kind", where), child(where, "kind"), landmark_kind_from_string);
  if (const json* s = optional_member(j, "source", where))
    l.source = enum_value(*s, child(where, "source"), landmark_source_from_string);
  const std::string pw = child(where, "position");
  const json& pos = member(j, "position", where);
  l.position.pen_stroke = integer(member(pos, "pen_stroke", pw), child(pw, "pen_stroke"));
  l.position.pass = integer(member(pos, "pass", pw), child(pw, "pass"));
  l.position.t = number(member(pos, "t", pw), child(pw, "t"));
  return l;
}

ReconstructionWeights weights_from_json(const json& j, const std::string& where) {
  ReconstructionWeights w;
  if (!j.is_object()) bad(where, "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string at = child(where, key);
    if (key == "pen_up") w.pen_up = number(v, at);
    else if (key == "turn_per_degree") w.turn_per_degree = number(v, at);
    else if (key == "retrace_per_length") w.retrace_per_length = number(v, at);
    else if (key == "start_prior") w.start_prior = number(v, at);
    else bad(at, "unknown weight");
  }
  return w;
}

CorpusDocument document_from_json(const json& j) {
  CorpusDocument doc;
  doc.format_version = string(member(j, "format_version", ""), "/format_version");
  if (doc.format_version != kFormatVersion)
    throw Error(ErrorCode::unsupported_version, "format_version \"" + doc.format_version + "\" is not supported (expected " +
                                                    std::string(kFormatVersion) + ")");
  const json& c = member(j, "corpus", "");
  doc.corpus.id = string(member(c, "id", "/corpus"), "/corpus/id");
  if (const json* n = optional_member(c, "name", "/corpus")) doc.corpus.name = string(*n, "/corpus/name");
  if (const json* b = optional_member(c, "baseline_y", "/corpus")) doc.corpus.baseline_y = number(*b, "/corpus/baseline_y");
  const json& glyphs = array(member(c, "glyphs", "/corpus"), "/corpus/glyphs");
  for (std::size_t i = 0; i < glyphs.size(); ++i) {
    Glyph g = glyph_from_json(glyphs[i], child("/corpus/glyphs", i));
    if (g.script_id.empty()) g.script_id = doc.corpus.id;
    doc.corpus.glyphs.push_back(std::move(g));
  }

  const auto keyed = [&](const char* key, auto&& read) {
    const json* m = optional_member(j, key, "");
    if (!m) return;
    const std::string mw = std::string("/") + key;
    if (!m->is_object()) bad(mw, "expected an object keyed by glyph id");
    for (const auto& [id, v] : m->items()) read(id, v, child(mw, id));
  };
  keyed("trajectories", [&](const std::string& id, const json& v, const std::string& at) {
    doc.trajectories[id] = trajectory_from_json(v, id, at);
  });
  keyed("candidates", [&](const std::string& id, const json& v, const std::string& at) {
    auto& list = doc.candidates[id];
    array(v, at);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string cw = child(at, i);
      CandidateTrajectory cand;
      cand.score = number(member(v[i], "score", cw), child(cw, "score"));
      const std::string bw = child(cw, "breakdown");
      const json& b = member(v[i], "breakdown", cw);
      cand.breakdown.pen_ups = number(member(b, "pen_ups", bw), child(bw, "pen_ups"));
      cand.breakdown.turn_degrees = number(member(b, "turn_degrees", bw), child(bw, "turn_degrees"));
      cand.breakdown.retrace_length = number(member(b, "retrace_length", bw), child(bw, "retrace_length"));
      cand.breakdown.start_prior = number(member(b, "start_prior", bw), child(bw, "start_prior"));
      cand.trajectory = trajectory_from_json(member(v[i], "trajectory", cw), id, child(cw, "trajectory"));
      list.push_back(std::move(cand));
    }
  });
  keyed("landmarks", [&](const std::string& id, const json& v, const std::string& at) {
    auto& list = doc.landmarks[id];
    array(v, at);
    for (std::size_t i = 0; i < v.size(); ++i) list.push_back(landmark_from_json(v[i], child(at, i)));
  });
  check_integrity(doc);
  return doc;
}

json canonicalized(json j) {
  if (j.is_number_float()) return json(canonical_float(j.get<double>()));
  if (j.is_structured())
    for (auto& v : j) v = canonicalized(std::move(v));
  return j;
}

}  // namespace jsonio

void check_integrity(const CorpusDocument& doc) {
  std::set<std::string> ids;
  for (const auto& g : doc.corpus.glyphs) {
    if (g.id.empty()) throw Error(ErrorCode::referential_integrity, "glyph with an empty id");
    if (!ids.insert(g.id).second) throw Error(ErrorCode::referential_integrity, "duplicate glyph id '" + g.id + "'");
  }
  const auto check = [&](const auto& m, const char* what) {
    for (const auto& [id, v] : m)
      if (!ids.count(id))
        throw Error(ErrorCode::referential_integrity, std::string(what) + " for missing glyph '" + id + "'");
  };
  check(doc.trajectories, "trajectory");
  check(doc.candidates, "candidates");
  check(doc.landmarks, "landmarks");
}

CorpusDocument parse_corpus(std::string_view text, const LoadOptions& options) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  CorpusDocument doc = jsonio::document_from_json(j);
  if (options.flip_y) {
    const auto flip = [](std::optional<double>& y) {
      if (y) y = -*y;
    };
    flip(doc.corpus.baseline_y);
    for (auto& g : doc.corpus.glyphs) {
      flip(g.baseline_y);
      for (auto& s : g.segments) {
        Spline::ControlMatrix c = s.control_points();
        c.row(1) *= -1;
        s = Spline(s.degree(), c, s.knots());
      }
    }
    for (auto& [id, ls] : doc.landmarks)
      for (auto& l : ls) l.location.y() = -l.location.y();
  }
  return doc;
}

CorpusDocument load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_corpus(ss.str(), options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io_error) throw;
    throw Error(e.code(), path.string() + ": " + std::string(e.what()).substr(to_string(e.code()).size() + 2));
  }
}

std::string canonical_string(const CorpusDocument& doc) {
  return jsonio::canonicalized(jsonio::to_json(doc)).dump(2) + "\n";
}

void save_corpus(const CorpusDocument& doc, const std::filesystem::path& path) {
  check_integrity(doc);
  write_file_atomic(path, canonical_string(doc));
}

// ---------------------------------------------------------------------------

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x == 0 ? 0.0 : x);
  return buf;
}

namespace {

std::string cell(const Metric<double>& m) { return m.has_value() ? format_number(*m) : ""; }

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quoted(cells[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

Table records_table(const std::vector<MetricRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::invalid_input, "no records to export");
  Table t;
  t.header.push_back("glyph_id");
  std::set<std::string> columns;
  for (const auto& [k, v] : scalar_fields(records.front())) columns.insert(k);
  for (const auto& [k, v] : list_fields(records.front())) columns.insert(k);
  t.header.insert(t.header.end(), columns.begin(), columns.end());
  for (const auto& r : records) {
    const auto scalars = scalar_fields(r);
    const auto lists = list_fields(r);
    std::vector<std::string> row{r.glyph_id};
    for (const auto& c : columns) {
      if (const auto it = scalars.find(c); it != scalars.end()) {
        row.push_back(cell(it->second));
        continue;
      }
      std::string joined;
      for (double v : lists.at(c)) joined += (joined.empty() ? "" : ";") + format_number(v);
      row.push_back(joined);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table script_metrics_table(const ScriptMetrics& m) {
  Table t{{"field", "mean", "weighted_mean"}, {}};
  for (const auto& [k, v] : m.means) {
    const auto w = m.weighted_means.find(k);
    t.rows.push_back({k, cell(v), w == m.weighted_means.end() ? "" : cell(w->second)});
  }
  return t;
}

Table similarity_table(const SimilarityMatrix& m) {
  Table t;
  t.header.push_back("glyph_id");
  t.header.insert(t.header.end(), m.glyph_ids.begin(), m.glyph_ids.end());
  for (std::size_t i = 0; i < m.glyph_ids.size(); ++i) {
    std::vector<std::string> row{m.glyph_ids[i]};
    for (std::size_t j = 0; j < m.glyph_ids.size(); ++j)
      row.push_back(format_number(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table parallel_coordinates_table(const ParallelCoordinates& p) {
  Table t{{"script_id", "glyph_id"}, {}};
  for (const auto& f : p.fields) {
    t.header.push_back(f);
    t.header.push_back(f + "_raw");
  }
  for (const auto& r : p.rows) {
    std::vector<std::string> row{r.script_id, r.glyph_id.value_or("")};
    for (std::size_t i = 0; i < p.fields.size(); ++i) {
      row.push_back(cell(r.normalized[i]));
      row.push_back(cell(r.raw[i]));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table histogram_table(const Histogram& h) {
  Table t{{"bin_lo", "bin_hi", "count"}, {}};
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    t.rows.push_back({format_number(h.edges[i]), format_number(h.edges[i + 1]), std::to_string(h.counts[i])});
  return t;
}

void write_csv(const Table& t, const std::filesystem::path& path) { write_file_atomic(path, to_csv(t)); }

}  // namespace glyphometrics
