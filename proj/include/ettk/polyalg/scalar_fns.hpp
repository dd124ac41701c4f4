#pragma once
/**
 * @file scalar_fns.hpp
 * @brief Scalar counterparts of the lifted analytic functions.
 *
 * Algebra-generic code (dynamics right-hand sides, network evaluation) calls
 * sin/exp/recip/... unqualified after `using` these and the std names; ADL
 * then resolves TPoly arguments to the polyalg overloads and doubles to
 * these. Keeping one code path is what guarantees the degree-0 jet matches
 * the scalar trajectory bit for bit.
 */

#include <cmath>

namespace ettk::alg {

[[nodiscard]] inline double recip(double x) { return 1.0 / x; }

[[nodiscard]] inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

[[nodiscard]] inline double softplus(double x) {
  return (x > 0.0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Constant "in the same algebra as like": for scalars, just the value.
[[nodiscard]] inline double constant_like(const double& /*like*/, double value) { return value; }

}  // namespace ettk::alg
