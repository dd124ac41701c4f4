#include "ettk/uncert/radius.hpp"

#include <cmath>
#include <stdexcept>

namespace ettk::uncert {

using polyalg::IndexTable;
using polyalg::TPoly;

double RadiusEstimate::at_order(int k) const {
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] == k) return values[i];
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

/// Admissibility under a restriction: full keeps everything, single-variable
/// keeps multi-indices supported on that variable alone.
bool admissible(const IndexTable& table, std::size_t rank, const Restriction& r) {
  if (r.full()) return true;
  const auto alpha = table.exponents(rank);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != 0 && static_cast<int>(i) != r.variable) return false;
  return true;
}

/// 0!..18!, the factorials that are exactly representable as doubles.
constexpr double kExactFactorial[] = {1.0,
                                      1.0,
                                      2.0,
                                      6.0,
                                      24.0,
                                      120.0,
                                      720.0,
                                      5040.0,
                                      40320.0,
                                      362880.0,
                                      3628800.0,
                                      39916800.0,
                                      479001600.0,
                                      6227020800.0,
                                      87178291200.0,
                                      1307674368000.0,
                                      20922789888000.0,
                                      355687428096000.0,
                                      6402373705728000.0};

/// Slice norm max |a_alpha| w_alpha over admissible ranks of degree k, with
/// w_alpha = (alpha!/k!)^{1/2} when weighted (identically 1 under a
/// single-variable restriction or for k <= 1). For k <= 18 the factorials are
/// exact doubles, so a unit weight multiplies by exactly 1; beyond that the
/// log-gamma path takes over.
double slice_norm(const TPoly& p, int k, const Restriction& r, bool weighted) {
  const IndexTable& table = p.table();
  const auto c = p.coeffs();
  const bool exact = k <= 18;
  const double log_k_fact = exact ? 0.0 : std::lgamma(static_cast<double>(k) + 1.0);
  double best = 0.0;
  const std::size_t lo = table.offset(k);
  const std::size_t hi = table.offset(k + 1);
  for (std::size_t rank = lo; rank < hi; ++rank) {
    if (c[rank] == 0.0 || !admissible(table, rank, r)) continue;
    double mag = std::abs(c[rank]);
    if (weighted && r.full() && k > 1) {
      if (exact) {
        double alpha_fact = 1.0;
        for (int a : table.exponents(rank)) alpha_fact *= kExactFactorial[a];
        mag *= std::sqrt(alpha_fact / kExactFactorial[k]);
      } else {
        mag *= std::exp(0.5 * (table.log_factorial(rank) - log_k_fact));
      }
    }
    best = std::max(best, mag);
  }
  return best;
}

void check_restriction(const TPoly& p, const Restriction& r) {
  if (!r.full() && (r.variable >= p.nvars()))
    throw std::invalid_argument("radius: restriction variable " + std::to_string(r.variable) + " out of range");
}

}  // namespace

RadiusEstimate ch_radius(const TPoly& poly, Restriction restriction) {
  poly.check_valid();
  check_restriction(poly, restriction);
  RadiusEstimate est;
  est.restriction = restriction;
  for (int k = 1; k <= poly.order(); ++k) {
    const double m = slice_norm(poly, k, restriction, true);
    if (m == 0.0) continue;
    est.orders.push_back(k);
    est.values.push_back(std::pow(m, -1.0 / static_cast<double>(k)));
  }
  if (est.orders.empty())
    throw std::invalid_argument("ch_radius: no admissible nonzero coefficients of degree >= 1");
  return est;
}

RadiusEstimate ratio_radius(const TPoly& poly, Restriction restriction) {
  poly.check_valid();
  check_restriction(poly, restriction);
  RadiusEstimate est;
  est.restriction = restriction;
  int prev_k = -1;
  double prev_m = 0.0;
  for (int k = 0; k <= poly.order(); ++k) {
    const double m = slice_norm(poly, k, restriction, false);
    if (m == 0.0) continue;
    if (prev_k >= 0) {
      est.orders.push_back(k);
      est.values.push_back(std::pow(prev_m / m, 1.0 / static_cast<double>(k - prev_k)));
    }
    prev_k = k;
    prev_m = m;
  }
  if (est.orders.empty()) throw std::invalid_argument("ratio_radius: fewer than two nonzero degree slices");
  return est;
}

std::vector<SweepEntry> per_state_radius_sweep(const polyalg::TaylorMap& map, int max_order,
                                               std::span<const double> var_units,
                                               std::span<const std::string> component_labels) {
  if (map.dim() == 0) throw std::invalid_argument("per_state_radius_sweep: empty map");
  const int k_max = std::min(max_order, map.order());
  if (k_max < 1) throw std::invalid_argument("per_state_radius_sweep: max_order must be >= 1");
  if (!var_units.empty() && static_cast<int>(var_units.size()) != map.nvars())
    throw std::invalid_argument("per_state_radius_sweep: var_units length mismatches map variables");

  std::vector<SweepEntry> table;
  table.reserve(static_cast<std::size_t>(map.dim()) * static_cast<std::size_t>(map.nvars()));
  for (int ci = 0; ci < map.dim(); ++ci) {
    const TPoly& p = map.component(ci);
    for (int vi = 0; vi < map.nvars(); ++vi) {
      SweepEntry e;
      e.component = ci;
      e.variable = vi;
      if (static_cast<std::size_t>(ci) < component_labels.size())
        e.component_label = component_labels[static_cast<std::size_t>(ci)];
      e.variable_label = map.var_labels().at(static_cast<std::size_t>(vi));
      const Restriction r = Restriction::single(vi);
      e.scaled.restriction = r;
      e.physical.restriction = r;
      const double unit = var_units.empty() ? 1.0 : var_units[static_cast<std::size_t>(vi)];
      for (int k = 1; k <= k_max; ++k) {
        const double m = slice_norm(p, k, r, false);
        if (m == 0.0) continue;
        const double rk = std::pow(m, -1.0 / static_cast<double>(k));
        e.scaled.orders.push_back(k);
        e.scaled.values.push_back(rk);
        e.physical.orders.push_back(k);
        e.physical.values.push_back(rk * unit);
      }
      // A component affine in this variable is entire along it: report the
      // unbounded sentinel instead of the meaningless degree-1 entry.
      e.unbounded = e.scaled.orders.empty() || e.scaled.orders.back() < 2;
      if (e.unbounded) {
        e.scaled = RadiusEstimate{{}, {}, r};
        e.physical = RadiusEstimate{{}, {}, r};
      }
      table.push_back(std::move(e));
    }
  }
  return table;
}

}  // namespace ettk::uncert
