#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rspider {

/// Operand shapes do not agree (e.g. an ambient gradient of the wrong size).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition was violated by the caller.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The two points are at or beyond the cut locus: no unique minimizing geodesic.
class CutLocusError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact parallel transport was requested between points that cannot be joined.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A least-squares subproblem was rank deficient and regularization was disabled.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative reference solver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value)
      : std::runtime_error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

/// An optimizer produced a non-finite objective or iterate.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace rspider
