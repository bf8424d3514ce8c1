#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttt::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kSolver = 3 };

/// Runs one invocation. Emitted artifacts go to `out` unless an output path
/// was given; messages go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ttt::cli
