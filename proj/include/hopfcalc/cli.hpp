#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace hopfcalc {

// Parses argv (including the program name) and runs one command, writing
// results to `out` and diagnostics to `err`.  Returns the exit code:
// 0 success, 1 invalid mathematical input, 2 parse or usage error,
// 3 resource cap exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace hopfcalc
