#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace layerfem {

/// Entry point of the command-line tool; `args` excludes the program name.
/// Returns 0 on success, 1 on usage errors and 2 when a case fails.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace layerfem
