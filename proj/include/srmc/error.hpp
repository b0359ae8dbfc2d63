#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srmc {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: malformed expressions, inconsistent domains, missing config
// fields.  The CLI maps these to exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

// Expression text that does not parse.  `offset` is the byte position of the
// first offending character.
struct ParseError : ValidationError {
  ParseError(const std::string& what, std::size_t offset_)
      : ValidationError(what + " (byte " + std::to_string(offset_) + ")"),
        offset(offset_) {}
  std::size_t offset;
};

// Runtime numerical trouble: non-finite values, metric not positive definite,
// solver failure.  The CLI maps these to exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace srmc
