#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace homapprox {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression or system description. `position` is a 0-based
// character offset into the offending text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Raised when an expression cannot be evaluated exactly (zero denominator,
// transcendental function of a nonzero argument).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class NotAccessibleError : public Error {
 public:
  using Error::Error;
};

class NotRepresentableError : public Error {
 public:
  using Error::Error;
};

// Violated internal invariant. Indicates a bug or a broken theory assumption.
class InternalError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace homapprox
