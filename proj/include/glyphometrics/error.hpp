#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glyphometrics {

enum class ErrorCode {
  invalid_input,
  curvature_undefined,
  degenerate_glyph,
  reconstruction_failed,
  metric_undefined,
  metric_unavailable,
  lb_index_undefined,
  unsupported_version,
  parse_error,
  referential_integrity,
  io_error,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::curvature_undefined: return "curvature-undefined";
    case ErrorCode::degenerate_glyph: return "degenerate-glyph";
    case ErrorCode::reconstruction_failed: return "reconstruction-failed";
    case ErrorCode::metric_undefined: return "metric-undefined";
    case ErrorCode::metric_unavailable: return "metric-unavailable";
    case ErrorCode::lb_index_undefined: return "lb-index-undefined";
    case ErrorCode::unsupported_version: return "unsupported-version";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::referential_integrity: return "referential-integrity";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

// All library failures surface as this type; the code is the stable part,
// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace glyphometrics
