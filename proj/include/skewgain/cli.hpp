#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skewgain::cli {

enum ExitCode : int { kOk = 0, kReferenceMismatch = 1, kInvalidInput = 2 };

/// Entry point behind the `skewgain` executable. `args` excludes the program
/// name. Structured output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skewgain::cli
