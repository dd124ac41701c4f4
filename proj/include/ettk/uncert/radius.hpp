#pragma once
/**
 * @file radius.hpp
 * @brief Convergence-radius estimation for truncated Taylor maps.
 *
 * The workhorse is the multivariate root test: for each total degree k the
 * slice norm M_k = max_{|alpha|=k} |a_alpha| (alpha!/k!)^{1/2} yields the
 * estimate r_k = M_k^{-1/k}, a finite-order proxy for the reciprocal lim sup.
 * The ratio of consecutive slice norms is offered as a diagnostic; it carries
 * the same information in the limit but oscillates at finite order, which is
 * exactly why it is kept separate from the headline estimator.
 */

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ettk/polyalg/taylor_map.hpp"
#include "ettk/polyalg/tpoly.hpp"

namespace ettk::uncert {

/// Restriction of a radius estimate: all variables jointly, or the section
/// along a single variable (all other perturbations pinned to zero).
struct Restriction {
  int variable = -1;  // -1 = full multivariate

  [[nodiscard]] bool full() const { return variable < 0; }
  static Restriction all() { return {}; }
  static Restriction single(int variable) { return {variable}; }
};

/// Per-order radius estimates. Entries exist only at orders where the
/// estimator is defined (zero degree slices leave gaps); `orders` is strictly
/// ascending and parallel to `values`.
struct RadiusEstimate {
  std::vector<int> orders;
  std::vector<double> values;
  Restriction restriction;

  /// The largest-order estimate; the sweep's headline number.
  [[nodiscard]] double headline() const {
    if (values.empty()) throw std::invalid_argument("RadiusEstimate: no defined entries");
    return values.back();
  }
  /// Value at a specific order, or NaN when that order is a gap.
  [[nodiscard]] double at_order(int k) const;
};

/// Root-test estimate r_k = 1 / max_{|alpha| = k admissible} (|a_alpha|
/// (alpha!/k!)^{1/2})^{1/k} for every nonzero degree slice k >= 1. Under a
/// single-variable restriction the factorial weight is identically one.
/// Throws std::invalid_argument when no admissible coefficient of degree >= 1
/// is nonzero.
[[nodiscard]] RadiusEstimate ch_radius(const polyalg::TPoly& poly, Restriction restriction = Restriction::all());

/// Ratio diagnostic: r_k = (M_j / M_k)^{1/(k-j)} where j < k is the previous
/// nonzero slice (degree 0 participates). For consecutive nonzero slices this
/// is the plain slice-norm ratio; zero slices leave gaps. Throws when fewer
/// than two nonzero slices exist.
[[nodiscard]] RadiusEstimate ratio_radius(const polyalg::TPoly& poly, Restriction restriction = Restriction::all());

/// One row of the per-state sweep: the single-variable root-test sequence of
/// one map component, in map variable units and de-scaled to physical units.
struct SweepEntry {
  int component = 0;
  int variable = 0;
  std::string component_label;
  std::string variable_label;
  bool unbounded = false;  // no degree >= 2 dependence: polynomial of degree <= 1, infinite radius
  RadiusEstimate scaled;
  RadiusEstimate physical;

  [[nodiscard]] double headline() const {
    return unbounded ? std::numeric_limits<double>::infinity() : scaled.headline();
  }
  [[nodiscard]] double physical_headline() const {
    return unbounded ? std::numeric_limits<double>::infinity() : physical.headline();
  }
};

/// Root-test sequences for every (component, variable) pair of a map, orders
/// up to max_order (capped at the map order). `var_units` de-scales variable
/// units to physical ones (empty = already physical); `component_labels` and
/// the map's var_labels annotate the rows. Components with no degree >= 2
/// dependence on a variable report the unbounded sentinel.
[[nodiscard]] std::vector<SweepEntry> per_state_radius_sweep(const polyalg::TaylorMap& map, int max_order,
                                                             std::span<const double> var_units = {},
                                                             std::span<const std::string> component_labels = {});

}  // namespace ettk::uncert
