#ifndef PROXNAG_TYPES_HPP
#define PROXNAG_TYPES_HPP

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace proxnag {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

/// Extended-real value: a finite double or +infinity, kept as an explicit
/// flag so that infeasibility is testable instead of hiding in a sentinel.
struct ExtendedValue {
  double value = 0.0;
  bool infinite = false;

  static ExtendedValue finite(double v) { return {v, false}; }
  static ExtendedValue infinity() { return {0.0, true}; }

  /// Collapses to a plain double (+inf when the flag is set).
  double as_double() const {
    return infinite ? std::numeric_limits<double>::infinity() : value;
  }
};

inline ExtendedValue operator+(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.infinite || b.infinite) return ExtendedValue::infinity();
  return ExtendedValue::finite(a.value + b.value);
}

// Error categories used across the library. Input/configuration problems are
// distinct from numerical failures, which carry the iteration index.

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, long iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration(iteration) {}
  long iteration;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_dimension(const Vector& x, Index d, const char* where) {
  if (x.size() != d)
    throw InputError(std::string(where) + ": expected dimension " +
                     std::to_string(d) + ", got " + std::to_string(x.size()));
}

}  // namespace proxnag

#endif  // PROXNAG_TYPES_HPP
