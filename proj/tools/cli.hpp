#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace conewave::cli {

enum ExitCode { ok = 0, verification_failure = 1, input_error = 2 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:step:b" (inclusive, tolerant to rounding) or "v1,v2,...".
std::vector<double> parse_range(const std::string& s);

} // namespace conewave::cli
