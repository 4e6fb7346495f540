#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lmsr {

/// Outcome space (or matrix) is larger than the configured enumeration cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument, such as an out-of-range index or a cyclic order.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A reduction hit a state it cannot resolve in the chosen numeric mode
/// (zero intermediate price, residue beyond floating precision).
class DegenerateInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text input could not be parsed. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Sinkhorn balancing did not reach tolerance within the iteration cap.
/// The last iterate (row-major) is kept for inspection.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::size_t dim, std::vector<double> last_iterate,
                   double deviation)
      : std::runtime_error(what),
        dim_(dim),
        last_(std::move(last_iterate)),
        deviation_(deviation) {}

  std::size_t dimension() const noexcept { return dim_; }
  const std::vector<double>& last_iterate() const noexcept { return last_; }
  double deviation() const noexcept { return deviation_; }

 private:
  std::size_t dim_;
  std::vector<double> last_;
  double deviation_;
};

}  // namespace lmsr
