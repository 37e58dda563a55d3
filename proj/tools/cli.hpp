#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace quasirand::cli {

// Runs the command line (args exclude the program name). Reports go to
// `out`, error JSON to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quasirand::cli
