#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace essim {

// Parses one subcommand and writes its report to out, diagnostics to err.
// Exit codes: 0 success, 1 property-check failure (a cross-check or oracle
// comparison came out false), 2 input or usage error. Output is byte-stable
// for identical inputs.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace essim
