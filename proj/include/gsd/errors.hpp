#pragma once

#include <stdexcept>
#include <string>

namespace gsd {

// Malformed inputs: bad partitions, grid mismatches, non-nested families, ...
// CLI maps this to exit code 3.
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Values outside an operation's domain (e.g. infinite where finite is required).
struct DomainError : StructuralError {
  explicit DomainError(const std::string& what) : StructuralError(what) {}
};

// Instance exceeds an enumeration cap. CLI maps this to exit code 4.
struct TooLargeError : std::runtime_error {
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

// Solver ran out of iterations; carries the worst certificate violation seen.
struct NonconvergenceError : std::runtime_error {
  NonconvergenceError(const std::string& what, double worst)
      : std::runtime_error(what), worst_violation(worst) {}
  double worst_violation;
};

}  // namespace gsd
