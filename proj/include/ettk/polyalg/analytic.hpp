#pragma once
/**
 * @file analytic.hpp
 * @brief Analytic functions lifted onto truncated polynomials.
 *
 * f(a) is computed by expanding f as a univariate Taylor series about the
 * constant part a0 of the argument and composing it with (a - a0) by Horner;
 * the nilpotent part makes the composition exact at the truncation order.
 * Series coefficients come from closed forms or stable recurrences (tanh,
 * sigmoid, softplus derive from their own logistic ODEs).
 */

#include <span>
#include <vector>

#include "ettk/polyalg/tpoly.hpp"

namespace ettk::polyalg {

enum class AnalyticFn { sin, cos, exp, log, sqrt, recip, pow, tanh, sigmoid, softplus };

/// Coefficients c_0..c_k of f(a0 + h) = sum_j c_j h^j. `param` is the
/// exponent for pow and ignored otherwise. Throws std::invalid_argument when
/// a0 sits outside the domain of f (log/sqrt/pow need a0 > 0, recip a0 != 0).
[[nodiscard]] std::vector<double> analytic_series(AnalyticFn f, double a0, int k, double param = 0.0);

/// f applied to a truncated polynomial argument.
[[nodiscard]] TPoly analytic_apply(AnalyticFn f, const TPoly& a, double param = 0.0);

// Named wrappers: these overload the scalar names so algebra-generic code can
// pick them up by argument-dependent lookup.
[[nodiscard]] TPoly sin(const TPoly& a);
[[nodiscard]] TPoly cos(const TPoly& a);
[[nodiscard]] TPoly exp(const TPoly& a);
[[nodiscard]] TPoly log(const TPoly& a);
[[nodiscard]] TPoly sqrt(const TPoly& a);
[[nodiscard]] TPoly recip(const TPoly& a);
[[nodiscard]] TPoly pow(const TPoly& a, double p);
[[nodiscard]] TPoly tanh(const TPoly& a);
[[nodiscard]] TPoly sigmoid(const TPoly& a);
[[nodiscard]] TPoly softplus(const TPoly& a);

/// Constant polynomial in the same algebra as `like`.
[[nodiscard]] TPoly constant_like(const TPoly& like, double value);

}  // namespace ettk::polyalg
