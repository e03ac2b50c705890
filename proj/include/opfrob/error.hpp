#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opfrob {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text. offset is the byte position of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Division by zero, 0^negative and similar failures while evaluating at a point.
class EvalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Invalid input data or a violated precondition that is not a verification failure.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace opfrob
