#pragma once
/**
 * @file moments.hpp
 * @brief Exact moment propagation of independent initial uncertainty through
 * polynomial maps.
 *
 * For independent perturbation variables the expectation of any monomial
 * factorizes into per-variable raw moments, so the expectation of a
 * polynomial map is a finite exact sum: no quadrature, no sampling. Raw
 * moments of the built-in uniform distribution come from its
 * moment-generating function, E[x^n] = (b^{n+1} - a^{n+1}) / ((n+1)(b-a));
 * any other independent per-variable law can be plugged in through a raw
 * moment provider. Covariances use exact products at doubled truncation
 * order, so second moments of an order-k map are never silently truncated.
 */

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ettk/polyalg/taylor_map.hpp"
#include "ettk/polyalg/tpoly.hpp"
#include "ettk/uncert/radius.hpp"

namespace ettk::uncert {

/// Independent uniform perturbations: variable i is U[lo[i], hi[i]] in the
/// map's (scaled) variable units.
struct UniformBox {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::string> labels;  // optional; checked against map labels when present

  [[nodiscard]] int dim() const { return static_cast<int>(lo.size()); }
  void validate() const;
  /// Half-width per variable (radius of the interval).
  [[nodiscard]] std::vector<double> half_width() const;
};

/// E[x^n] for x ~ U[a, b]: the n-th derivative at zero of the mgf
/// (e^{tb} - e^{ta}) / (t(b - a)).
[[nodiscard]] double uniform_raw_moment(double a, double b, int n);

/// Per-variable raw-moment provider: E[x_i^n]. Bridges distributions other
/// than uniform into the same propagation path.
using RawMomentFn = std::function<double(int variable, int power)>;

/// Provider view of a box.
[[nodiscard]] RawMomentFn uniform_moments(const UniformBox& box);

/// E[delta^alpha] = prod_i E[delta_i^{alpha_i}] (independence).
[[nodiscard]] double expected_monomial(const UniformBox& box, std::span<const int> alpha);

/// Expectation of a polynomial under a raw-moment provider (exact finite sum
/// over nonzero coefficients).
[[nodiscard]] double expected_value(const polyalg::TPoly& poly, const RawMomentFn& moments);

/// Statistical moments of the map components. `central[i]` holds central
/// moments of component i of orders 3..central_order (empty below 3).
struct MomentSet {
  std::vector<double> mean;
  std::vector<double> covariance;  // row-major dim x dim; empty when only the mean was requested
  std::vector<std::vector<double>> central;
  int map_order = 0;
  int central_order = 2;
  std::vector<std::string> labels;
  std::vector<double> unit_scale;  // physical value per internal unit, per component (empty = 1)
  bool variance_clamped = false;   // a slightly negative diagonal entry was clamped to zero
  bool radius_warning = false;     // box exceeded a per-variable radius estimate

  [[nodiscard]] int dim() const { return static_cast<int>(mean.size()); }
  [[nodiscard]] double cov(int i, int j) const {
    return covariance[static_cast<std::size_t>(i) * mean.size() + static_cast<std::size_t>(j)];
  }
  /// Mean and covariance rescaled by unit_scale (identity when absent).
  [[nodiscard]] std::vector<double> mean_physical() const;
  [[nodiscard]] std::vector<double> covariance_physical() const;
};

/// Moments of map(delta) for delta ~ box. `up_to` = 1 computes the mean only,
/// 2 adds the covariance, m >= 3 adds marginal central moments up to order m.
/// The box is checked against per-variable radius estimates of the map; lying
/// outside only sets radius_warning (the expansion still defines a polynomial
/// whose moments are exact, but its fidelity to the underlying flow is no
/// longer indicated).
[[nodiscard]] MomentSet propagate_moments(const polyalg::TaylorMap& map, const UniformBox& box, int up_to = 2,
                                          std::span<const double> component_units = {},
                                          std::span<const std::string> component_labels = {});

/// Same propagation under an arbitrary independent raw-moment provider; no
/// radius check (the provider carries no support information).
[[nodiscard]] MomentSet propagate_moments(const polyalg::TaylorMap& map, const RawMomentFn& moments, int up_to = 2,
                                          std::span<const double> component_units = {},
                                          std::span<const std::string> component_labels = {});

}  // namespace ettk::uncert
