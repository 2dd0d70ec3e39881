#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fspec::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kIo = 4 };

/// Runs the front end on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fspec::cli
