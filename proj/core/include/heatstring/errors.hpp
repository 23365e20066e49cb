#pragma once

#include <stdexcept>
#include <string>

namespace heatstring {

// Base for every failure raised by the library. Callers that only care about
// "something went wrong numerically or with the inputs" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sequence lengths disagree with ModelParams::n_modes or with each other.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of the operation (n < 1, s out of
// range, non-positive values under a logarithm, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Grid too coarse for the requested truncation.
class AliasingError : public Error {
 public:
  using Error::Error;
};

// A weighted sum whose constant is infinite for the requested exponents.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Root polishing could not reach the residual target.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// Numerically singular similarity or projection basis.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Non-finite values produced during time stepping.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

// Time grid incompatible with the Duhamel quadrature.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

// Configuration text could not be parsed. Line 0 means no particular line
// (missing file or missing key).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace heatstring
