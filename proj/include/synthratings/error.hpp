#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synthratings {

/// Invalid caller-supplied argument (CLI exit code 2).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input data (CLI exit code 3).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A without-replacement draw asked for more outcomes than the support holds.
class InfeasibleDraw : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal invariant violated (CLI exit code 4).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace synthratings
