#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mqg {

// Dispatches one command line; returns the process exit code
// (0 ok, 1 failed checks, 2 usage or syntax errors).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mqg
