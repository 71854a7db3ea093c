#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace allostery::cli {

enum ExitCode : int { kValid = 0, kInvalid = 1, kMalformed = 2 };

/// Runs one subcommand. `args` excludes the program name. Certificates and
/// tables go to `out`, diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace allostery::cli
