#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liepulse {

// Bad input to a numerical routine: wrong dimension, index out of range,
// non-unitary or non-Hermitian operand.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A Gram-Schmidt pivot collapsed. column() is 1-based.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, std::size_t column)
      : std::runtime_error(what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

// The physical model is inconsistent (e.g. energies not strictly increasing).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pulse schedule cannot be realized with the requested timing.
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity that must be real/unitary drifted beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (decomposition, schedule or matrix file). line() is
// 1-based, 0 when unknown.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace liepulse
