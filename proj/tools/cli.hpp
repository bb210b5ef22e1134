#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qeig::cli {

enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kBadInput = 2 };

// Runs one command line (without the program name). Reads "-" inputs from
// `in`, writes the result document to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qeig::cli
