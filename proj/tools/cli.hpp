#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maxmult::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kGateFailure = 3, kNonFinite = 4 };

/// Environment variable that overrides the output directory.
inline constexpr const char* kOutDirEnv = "MAXMULT_OUT_DIR";

/// Parses argv-style arguments (without the program name), runs the
/// selected experiment and writes its artifacts. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxmult::cli
