#pragma once

#include <stdexcept>
#include <string>

namespace grw {

// Expression text could not be parsed. `position` is a byte offset into the
// source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position)
      : std::runtime_error(std::move(message)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Evaluation left the domain of an expression or of the metric (log/sqrt of a
// non-positive value, division by zero, degenerate metric, non-finite result).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A spacetime or field description violates its structural preconditions
// (dimension too small, arity mismatch, warp non-positive at a sampled point).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scenario document is malformed. Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grw
