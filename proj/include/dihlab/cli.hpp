#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dihlab {

// Dispatches the command line.  Exit status: 0 = all hard checks pass,
// 1 = theorem violation or computation error, 2 = usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dihlab
