#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "glyphometrics/pipeline.hpp"

namespace glyphometrics {

/// HTTP-shaped API over one corpus document. Requests are served from the
/// stored state every time; nothing is cached across revisions. Mutations take
/// the writer lock and must carry `expected_revision` equal to the current one.
///
///   GET   /corpus                     summary
///   GET   /glyphs/{id}                geometry, trajectory, candidates, segmentation, metrics
///   POST  /glyphs                     add a glyph (segments, or polylines to fit)
///   POST  /glyphs/{id}/reconstruct    compute and store candidates {weights?, top?}
///   PUT   /glyphs/{id}/trajectory     {candidate_index | trajectory}; resets landmarks
///   PATCH /glyphs/{id}/landmarks      {add?: [[x, y]], remove?: [i], kind?}
///   GET   /script/stats               script means, histograms, similarity, bigram, directions
///   POST  /save                       persist to the corpus path
class AnnotationService {
 public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  AnnotationService(CorpusDocument doc, std::filesystem::path path, AnalysisOptions options = {});
  static AnnotationService open(const std::filesystem::path& path, AnalysisOptions options = {});

  Response handle(std::string_view method, std::string_view path, std::string_view body);

  std::uint64_t revision() const;
  bool dirty() const;

 private:
  // A mutation's result; `view` builds the response body after the commit.
  struct Outcome {
    int status = 200;
    nlohmann::json error;
    std::function<nlohmann::json()> view;
  };

  nlohmann::json glyph_view(const Glyph& g) const;
  Response mutate(std::string_view body, const std::function<Outcome(CorpusDocument&, const nlohmann::json&)>& apply);

  mutable std::shared_mutex mutex_;
  CorpusDocument doc_;
  std::filesystem::path path_;
  AnalysisOptions options_;
  std::uint64_t revision_ = 0;
  bool dirty_ = false;
};

/// HTTP front end for an AnnotationService; JSON bodies, same status codes.
class HttpServer {
 public:
  explicit HttpServer(AnnotationService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port.
  int start(const std::string& host, int port);
  void stop();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace glyphometrics
