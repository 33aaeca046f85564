#include "glyphometrics/annotation_service.hpp"

#include <mutex>

namespace glyphometrics {

namespace {

using nlohmann::json;

json error_body(const std::string& message) { return {{"error", message}}; }

std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::vector<std::string> split_path(std::string_view path) {
  if (const auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    const auto j = path.find('/', i);
    const auto part = path.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i);
    if (!part.empty()) parts.push_back(url_decode(part));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return parts;
}

bool same_landmarks(const std::vector<LandmarkPoint>& a, const std::vector<LandmarkPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind || a[i].source != b[i].source) return false;
    if (a[i].position.pen_stroke != b[i].position.pen_stroke || a[i].position.pass != b[i].position.pass) return false;
    if (std::abs(a[i].position.t - b[i].position.t) > 1e-8) return false;
  }
  return true;
}

}  // namespace

AnnotationService::AnnotationService(CorpusDocument doc, std::filesystem::path path, AnalysisOptions options)
    : doc_(parse_corpus(canonical_string(doc))), path_(std::move(path)), options_(options) {}

AnnotationService AnnotationService::open(const std::filesystem::path& path, AnalysisOptions options) {
  return AnnotationService(load_corpus(path), path, options);
}

std::uint64_t AnnotationService::revision() const {
  std::shared_lock lock(mutex_);
  return revision_;
}

bool AnnotationService::dirty() const {
  std::shared_lock lock(mutex_);
  return dirty_;
}

json AnnotationService::glyph_view(const Glyph& g) const {
  json out = {{"revision", revision_}, {"glyph", jsonio::to_json(g)}};
  json cands = json::array();
  if (const auto it = doc_.candidates.find(g.id); it != doc_.candidates.end())
    for (const auto& c : it->second) cands.push_back(jsonio::to_json(c));
  out["candidates"] = cands;
  out["landmarks_edited"] = doc_.landmarks.count(g.id) > 0;
  out["trajectory"] = nullptr;
  out["segmentation"] = nullptr;
  out["metrics"] = nullptr;
  out["error"] = nullptr;
  const auto t = doc_.trajectories.find(g.id);
  if (t == doc_.trajectories.end()) {
    out["error"] = "no trajectory selected; reconstruct and choose a candidate";
    return out;
  }
  out["trajectory"] = jsonio::to_json(t->second);
  const GlyphAnalysis a = analyze_glyph(doc_, g, options_);
  if (a.segmentation) out["segmentation"] = jsonio::to_json(*a.segmentation);
  if (a.record) out["metrics"] = jsonio::to_json(*a.record);
  if (!a.error.empty()) out["error"] = a.error;
  return out;
}

AnnotationService::Response AnnotationService::mutate(
    std::string_view body, const std::function<Outcome(CorpusDocument&, const json&)>& apply) {
  json req;
  try {
    req = body.empty() ? json::object() : json::parse(body);
  } catch (const json::parse_error& e) {
    return {422, error_body(std::string("malformed JSON body: ") + e.what())};
  }
  if (!req.is_object()) return {422, error_body("request body must be a JSON object")};

  std::unique_lock lock(mutex_);
  const auto expected = req.find("expected_revision");
  if (expected == req.end() || !expected->is_number_unsigned())
    return {422, {{"error", "expected_revision is required"}, {"revision", revision_}}};
  if (expected->get<std::uint64_t>() != revision_)
    return {409, {{"error", "revision conflict"}, {"revision", revision_}}};

  CorpusDocument draft = doc_;
  Outcome outcome;
  try {
    outcome = apply(draft, req);
  } catch (const Error& e) {
    outcome = {422, error_body(e.what()), {}};
  }
  if (outcome.status >= 300) {
    outcome.error["revision"] = revision_;
    return {outcome.status, outcome.error};
  }
  // Stored state is always in canonical form, so a saved and reloaded
  // document answers exactly as the live one did.
  doc_ = parse_corpus(canonical_string(draft));
  ++revision_;
  dirty_ = true;
  json view = outcome.view();
  view["revision"] = revision_;
  return {outcome.status, jsonio::canonicalized(view)};
}

AnnotationService::Response AnnotationService::handle(std::string_view method, std::string_view path,
                                                      std::string_view body) {
  const auto parts = split_path(path);
  const auto not_found = [&](const std::string& what) { return Response{404, error_body(what)}; };

  if (method == "GET" && parts == std::vector<std::string>{"corpus"}) {
    std::shared_lock lock(mutex_);
    json glyphs = json::array();
    for (const auto& g : doc_.corpus.glyphs) {
      const auto c = doc_.candidates.find(g.id);
      glyphs.push_back({{"id", g.id},
                        {"label", g.label ? json(*g.label) : json(nullptr)},
                        {"usage_frequency", g.usage_frequency ? json(*g.usage_frequency) : json(nullptr)},
                        {"segments", g.segments.size()},
                        {"has_trajectory", doc_.trajectories.count(g.id) > 0},
                        {"candidates", c == doc_.candidates.end() ? 0 : c->second.size()},
                        {"landmarks_edited", doc_.landmarks.count(g.id) > 0}});
    }
    json out = {{"revision", revision_},
                {"dirty", dirty_},
                {"format_version", doc_.format_version},
                {"id", doc_.corpus.id},
                {"name", doc_.corpus.name},
                {"baseline_y", doc_.corpus.baseline_y ? json(*doc_.corpus.baseline_y) : json(nullptr)},
                {"glyphs", glyphs}};
    return {200, jsonio::canonicalized(out)};
  }

  if (method == "GET" && parts == std::vector<std::string>{"script", "stats"}) {
    std::shared_lock lock(mutex_);
    std::vector<GlyphAnalysis> analyses;
    for (const auto& g : doc_.corpus.glyphs) {
      if (doc_.trajectories.count(g.id)) {
        analyses.push_back(analyze_glyph(doc_, g, options_));
      } else {
        analyses.push_back({g.id, {}, false, {}, {}, "no trajectory selected"});
      }
    }
    try {
      const ScriptReport rep = script_report(doc_, analyses, options_);
      json out = {{"revision", revision_},
                  {"script_id", doc_.corpus.id},
                  {"metrics", jsonio::to_json(rep.metrics)},
                  {"directions", jsonio::to_json(rep.directions)},
                  {"warnings", rep.warnings}};
      out["bigram"] = rep.bigram ? jsonio::to_json(*rep.bigram) : json(nullptr);
      out["bigram_add_one"] = rep.bigram_smoothed ? jsonio::to_json(*rep.bigram_smoothed) : json(nullptr);
      out["similarity"] = rep.trajectory_similarity ? jsonio::to_json(*rep.trajectory_similarity) : json(nullptr);
      out["static_similarity"] = rep.static_similarity ? jsonio::to_json(*rep.static_similarity) : json(nullptr);
      return {200, jsonio::canonicalized(out)};
    } catch (const Error& e) {
      return {422, {{"error", e.what()}, {"revision", revision_}}};
    }
  }

  if (method == "POST" && parts == std::vector<std::string>{"save"}) {
    std::unique_lock lock(mutex_);
    try {
      save_corpus(doc_, path_);
    } catch (const Error& e) {
      return {500, {{"error", e.what()}, {"revision", revision_}}};
    }
    dirty_ = false;
    return {200, {{"revision", revision_}, {"saved", path_.string()}}};
  }

  if (method == "POST" && parts == std::vector<std::string>{"glyphs"}) {
    return mutate(body, [&](CorpusDocument& doc, const json& req) -> Outcome {
      Glyph g;
      if (const auto it = req.find("glyph"); it != req.end()) {
        g = jsonio::glyph_from_json(*it, "/glyph");
      } else {
        const auto id = req.find("id");
        const auto lines = req.find("polylines");
        if (id == req.end() || !id->is_string() || lines == req.end() || !lines->is_array() || lines->empty())
          return {422, error_body("expected a glyph, or an id with non-empty polylines"), {}};
        g.id = id->get<std::string>();
        std::vector<Polyline> polylines;
        Rect box;
        for (std::size_t i = 0; i < lines->size(); ++i) {
          Polyline pl;
          const json& line = (*lines)[i];
          if (!line.is_array()) return {422, error_body("polylines/" + std::to_string(i) + " is not an array"), {}};
          for (std::size_t k = 0; k < line.size(); ++k) {
            pl.push_back(jsonio::point_from_json(line[k], "/polylines/" + std::to_string(i) + "/" + std::to_string(k)));
            box.extend(pl.back());
          }
          polylines.push_back(std::move(pl));
        }
        double tol = 0.005 * box.diagonal();
        if (const auto t = req.find("tolerance"); t != req.end() && t->is_number()) tol = t->get<double>();
        if (!(tol > 0)) return {422, error_body("drawing is a single point; nothing to fit"), {}};
        for (const auto& pl : polylines) g.segments.push_back(fit_spline(pl, tol));
        if (const auto l = req.find("label"); l != req.end() && l->is_string()) g.label = l->get<std::string>();
        if (const auto b = req.find("baseline_y"); b != req.end() && b->is_number()) g.baseline_y = b->get<double>();
      }
      if (g.script_id.empty()) g.script_id = doc.corpus.id;
      if (doc.corpus.find(g.id)) return {422, error_body("glyph '" + g.id + "' already exists"), {}};
      if (const auto issues = validate(g); !issues.empty()) return {422, error_body(issues.front()), {}};
      doc.corpus.glyphs.push_back(g);
      const std::string id = g.id;
      return {201, {}, [this, id] { return glyph_view(*doc_.corpus.find(id)); }};
    });
  }

  if (parts.size() < 2 || parts[0] != "glyphs") return not_found("no such endpoint");
  const std::string id = parts[1];
  {
    std::shared_lock lock(mutex_);
    if (!doc_.corpus.find(id)) return not_found("unknown glyph '" + id + "'");
  }

  if (parts.size() == 2 && method == "GET") {
    std::shared_lock lock(mutex_);
    return {200, jsonio::canonicalized(glyph_view(*doc_.corpus.find(id)))};
  }
  if (parts.size() != 3) return not_found("no such endpoint");
  const auto view = [this, id] { return glyph_view(*doc_.corpus.find(id)); };

  if (parts[2] == "reconstruct" && method == "POST") {
    return mutate(body, [&](CorpusDocument& doc, const json& req) -> Outcome {
      ReconstructionConfig cfg = options_.reconstruction;
      if (const auto w = req.find("weights"); w != req.end()) cfg.weights = jsonio::weights_from_json(*w, "/weights");
      if (const auto top = req.find("top"); top != req.end()) {
        if (!top->is_number_integer() || top->get<int>() < 1 || top->get<int>() > 50)
          return {422, error_body("top must be an integer in 1..50"), {}};
        cfg.max_candidates = top->get<int>();
      }
      const Glyph& g = *doc.corpus.find(id);
      doc.candidates[id] = reconstruct(measured_glyph(doc.corpus, g, false), cfg);
      return {200, {}, [this, id] {
                json cands = json::array();
                for (const auto& c : doc_.candidates.at(id)) cands.push_back(jsonio::to_json(c));
                return json{{"glyph_id", id}, {"candidates", cands}};
              }};
    });
  }

  if (parts[2] == "trajectory" && method == "PUT") {
    return mutate(body, [&](CorpusDocument& doc, const json& req) -> Outcome {
      const Glyph& g = *doc.corpus.find(id);
      Trajectory t;
      if (const auto ci = req.find("candidate_index"); ci != req.end()) {
        if (!ci->is_number_integer()) return {422, error_body("candidate_index must be an integer"), {}};
        const auto c = doc.candidates.find(id);
        if (c == doc.candidates.end()) return {422, error_body("no candidates; reconstruct first"), {}};
        t = select_trajectory(g, c->second, ci->get<int>());
      } else if (const auto tj = req.find("trajectory"); tj != req.end()) {
        t = jsonio::trajectory_from_json(*tj, id, "/trajectory");
        if (tj->find("provenance") == tj->end()) t.provenance = Provenance::manual;
        require_valid(g, t);
      } else {
        return {422, error_body("expected candidate_index or trajectory"), {}};
      }
      doc.trajectories[id] = t;
      doc.landmarks.erase(id);  // positions refer to the old trajectory
      return {200, {}, view};
    });
  }

  if (parts[2] == "landmarks" && method == "PATCH") {
    return mutate(body, [&](CorpusDocument& doc, const json& req) -> Outcome {
      const auto t = doc.trajectories.find(id);
      if (t == doc.trajectories.end()) return {422, error_body("no trajectory selected"), {}};
      std::vector<Point> add;
      std::vector<int> remove;
      LandmarkKind kind = LandmarkKind::curvature_extremum;
      if (const auto a = req.find("add"); a != req.end()) {
        if (!a->is_array()) return {422, error_body("add must be an array of points"), {}};
        for (std::size_t i = 0; i < a->size(); ++i)
          add.push_back(jsonio::point_from_json((*a)[i], "/add/" + std::to_string(i)));
      }
      if (const auto r = req.find("remove"); r != req.end()) {
        if (!r->is_array()) return {422, error_body("remove must be an array of indices"), {}};
        for (const auto& v : *r) {
          if (!v.is_number_integer()) return {422, error_body("remove must be an array of indices"), {}};
          remove.push_back(v.get<int>());
        }
      }
      if (const auto k = req.find("kind"); k != req.end()) {
        if (!k->is_string()) return {422, error_body("kind must be a string"), {}};
        kind = landmark_kind_from_string(k->get<std::string>());
      }
      const GlyphAnalysis current = analyze_glyph(doc, *doc.corpus.find(id), options_);
      if (!current.segmentation) return {422, error_body(current.error), {}};
      const Glyph g = measured_glyph(doc.corpus, *doc.corpus.find(id), false);
      const auto next = override_landmarks(g, t->second, *current.segmentation, add, remove, options_.segmentation, kind);
      // An edit that lands back on the automatic landmarks drops the override.
      if (same_landmarks(next.landmarks, detect_landmarks(g, t->second, options_.segmentation))) {
        doc.landmarks.erase(id);
      } else {
        doc.landmarks[id] = next.landmarks;
      }
      return {200, {}, view};
    });
  }

  return not_found("no such endpoint");
}

}  // namespace glyphometrics
