#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace glyphometrics {

/// The glyphometrics command line. `args` excludes the program name.
/// Exit codes: 0 success, 1 domain error (including per-glyph failures),
/// 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glyphometrics
