#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace theta_atlas::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "lo:hi:step" into lo, lo + step, ... <= hi (with a small tolerance
/// on the last point). Throws std::invalid_argument on malformed or empty
/// grids and on points outside (0, 1).
std::vector<double> parse_grid(const std::string& spec);

}  // namespace theta_atlas::cli
