#pragma once
#include <stdexcept>
#include <string>

namespace hopfcalc {

// Violated mathematical precondition (non-cocycle input, mismatched models,
// invalid model data discovered mid-computation, ...).  CLI exit code 1.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file or expression.  Carries a 1-based line number when known
// (0 = not line-oriented, e.g. inline expression).  CLI exit code 2.
struct parse_error : std::runtime_error {
    int line;
    parse_error(const std::string& what, int line_ = 0)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what : what),
          line(line_) {}
};

// A basis enumeration exceeded the configured piece-dimension cap.
// CLI exit code 3.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hopfcalc
