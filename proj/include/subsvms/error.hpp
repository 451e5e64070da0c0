#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subsvms {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed LIBSVM input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// SMO hit max_passes before reaching the KKT tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Hard-margin training did not find a separating solution.
class NonSeparableError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace subsvms
