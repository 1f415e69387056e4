#pragma once

#include <stdexcept>
#include <string>

namespace hypertune {

/// Shape mismatch between arguments (arity, image dimensions, ...).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value is well-formed but violates a domain constraint.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Covariance factorization failed even after jitter escalation.
class IllConditionedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every lattice point has been visited; there is nothing left to propose.
class ExhaustedSpace : public std::runtime_error {
 public:
  ExhaustedSpace() : std::runtime_error("search space exhausted") {}
};

/// Raised when a lattice is larger than the enumeration cap.
class LatticeTooLarge : public std::length_error {
 public:
  LatticeTooLarge(double size, double cap)
      : std::length_error("lattice has " + std::to_string(size) +
                          " points, enumeration cap is " +
                          std::to_string(cap)),
        size_(size) {}
  double size() const noexcept { return size_; }

 private:
  double size_;
};

/// Configuration problems, anchored to a location in the source file when
/// one is known (line/column are 1-based; 0 means unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string &message, int line = 0, int column = 0)
      : std::runtime_error(message), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace hypertune
