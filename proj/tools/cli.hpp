#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mpadiag::cli {

// Runs one subcommand; args excludes the program name. For `check` the exit
// code is 0 diagnosable, 1 not diagnosable, 2 inconclusive; 3 means a usage or
// input error for every subcommand.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpadiag::cli
