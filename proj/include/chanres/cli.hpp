#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chanres {

/// Exit codes: 0 success, 2 invalid input, 3 accuracy failure.
int cli_main(int argc, char** argv);

/// Same with explicit arguments (without the program name) and streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chanres
