#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fptmc::cli {

/// Runs the fptmc command line (args without the program name) against the
/// given streams. Returns the process exit code: 0 success, 2 parse error,
/// 3 validation error, 4 numerical failure, 5 Monte Carlo skip overflow.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fptmc::cli
