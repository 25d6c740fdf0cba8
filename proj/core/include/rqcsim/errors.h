#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rqcsim {

// Malformed text input (circuit or plan files). Carries the 1-based line.
class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A computation would exceed the configured memory budget or a hard cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values or similar numerical failures.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rqcsim
