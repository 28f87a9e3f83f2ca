#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qkick::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kContract = 3,
  kResource = 4,
};

/// Parses and runs one qkick command. Output written to "-" goes to `out`;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with argv[0] supplied.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkick::cli
