#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noncoh::cli {

/// Exit codes: 0 success, 1 a selfcheck invariant failed, 2 usage error,
/// 3 invalid channel or parameter, 4 numeric non-convergence.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// %.12g through std::to_chars.
std::string format_number(double v);

/// Rows of a figure as CSV text (header first, '\n' line endings).
std::string figure_csv(const std::string& name, int points = 0);

}  // namespace noncoh::cli
