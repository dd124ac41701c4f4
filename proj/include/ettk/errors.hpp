#pragma once
/**
 * @file errors.hpp
 * @brief Exception taxonomy used across the toolkit.
 *
 * Contract violations (bad arguments, mixed algebras, malformed files) throw
 * std::invalid_argument or config_error; runtime breakdowns of the numerics
 * (non-convergence, step collapse, indefinite matrices) throw numerical_error
 * or one of its refinements so callers can react per failure mode.
 */

#include <stdexcept>
#include <string>

namespace ettk {

/// Numerical failure: non-convergent iteration, step-size collapse,
/// indefinite covariance, loss divergence, and similar runtime breakdowns.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Tangential event contact: the event function touches zero without a
/// transversal crossing, so no locally invertible trigger time exists.
class grazing_error : public numerical_error {
 public:
  explicit grazing_error(const std::string& what) : numerical_error(what) {}
};

/// The nominal (or required) trajectory never reaches the event manifold
/// within the allowed horizon.
class event_miss_error : public numerical_error {
 public:
  explicit event_miss_error(const std::string& what) : numerical_error(what) {}
};

/// Malformed configuration, weight file, mesh file, or schema violation.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ettk
