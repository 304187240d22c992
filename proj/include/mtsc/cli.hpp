#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage or I/O error,
// 2 failed check (repro FAIL, Markov failure, no feasible system).

#include <iosfwd>
#include <string>
#include <vector>

namespace mtsc {

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace mtsc
