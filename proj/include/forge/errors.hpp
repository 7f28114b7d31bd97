#pragma once

#include <stdexcept>
#include <string>

namespace forge {

// Bad user input: malformed files, out-of-domain values, contract violations.
// The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unparseable line in an input file; carries the offending line number.
struct ParseError : ValidationError {
  ParseError(const std::string& what, std::size_t line)
      : ValidationError(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  std::size_t line_number;
};

}  // namespace forge
