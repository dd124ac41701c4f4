#include "ettk/uncert/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace ettk::uncert {

using polyalg::TPoly;

void UniformBox::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw std::invalid_argument("UniformBox: bounds length mismatch");
  if (!labels.empty() && labels.size() != lo.size())
    throw std::invalid_argument("UniformBox: labels length mismatches bounds");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i]))
      throw std::invalid_argument("UniformBox: lower bound must be strictly below upper bound (variable " +
                                  std::to_string(i) + ")");
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw std::invalid_argument("UniformBox: bounds must be finite");
  }
}

std::vector<double> UniformBox::half_width() const {
  std::vector<double> h(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) h[i] = 0.5 * (hi[i] - lo[i]);
  return h;
}

namespace {

/// Exact integer power by binary exponentiation; keeps symmetric-interval odd
/// moments at exactly zero, which std::pow would only approximate.
double ipow(double x, int n) {
  double acc = 1.0;
  double base = x;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) acc *= base;
    base *= base;
  }
  return acc;
}

}  // namespace

double uniform_raw_moment(double a, double b, int n) {
  if (!(a < b)) throw std::invalid_argument("uniform_raw_moment: needs a < b");
  if (n < 0) throw std::invalid_argument("uniform_raw_moment: power must be >= 0");
  if (n == 0) return 1.0;
  return (ipow(b, n + 1) - ipow(a, n + 1)) / (static_cast<double>(n + 1) * (b - a));
}

RawMomentFn uniform_moments(const UniformBox& box) {
  box.validate();
  return [box](int variable, int power) {
    return uniform_raw_moment(box.lo.at(static_cast<std::size_t>(variable)),
                              box.hi.at(static_cast<std::size_t>(variable)), power);
  };
}

double expected_monomial(const UniformBox& box, std::span<const int> alpha) {
  box.validate();
  if (static_cast<int>(alpha.size()) != box.dim())
    throw std::invalid_argument("expected_monomial: multi-index length mismatches box dimension");
  double prod = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0) throw std::invalid_argument("expected_monomial: negative exponent");
    if (alpha[i] > 0) prod *= uniform_raw_moment(box.lo[i], box.hi[i], alpha[i]);
  }
  return prod;
}

namespace {

/// Lazy per-variable raw-moment table; E[x^0] = 1 by definition.
class MomentCache {
 public:
  MomentCache(const RawMomentFn& fn, int nvars) : fn_(fn), table_(static_cast<std::size_t>(nvars), {1.0}) {}

  double get(std::size_t var, int power) {
    auto& row = table_[var];
    while (static_cast<int>(row.size()) <= power) row.push_back(fn_(static_cast<int>(var), static_cast<int>(row.size())));
    return row[static_cast<std::size_t>(power)];
  }

 private:
  const RawMomentFn& fn_;
  std::vector<std::vector<double>> table_;
};

double expected_value_cached(const TPoly& poly, MomentCache& cache) {
  const auto& table = poly.table();
  const auto c = poly.coeffs();
  double acc = 0.0;
  for (std::size_t r = 0; r < c.size(); ++r) {
    if (c[r] == 0.0) continue;
    double term = c[r];
    const auto alpha = table.exponents(r);
    for (std::size_t i = 0; i < alpha.size(); ++i)
      if (alpha[i] != 0) term *= cache.get(i, alpha[i]);
    acc += term;
  }
  return acc;
}

}  // namespace

double expected_value(const polyalg::TPoly& poly, const RawMomentFn& moments) {
  poly.check_valid();
  MomentCache cache(moments, poly.nvars());
  return expected_value_cached(poly, cache);
}

MomentSet propagate_moments(const polyalg::TaylorMap& map, const RawMomentFn& moments, int up_to,
                            std::span<const double> component_units, std::span<const std::string> component_labels) {
  if (map.dim() == 0) throw std::invalid_argument("propagate_moments: empty map");
  if (up_to < 1) throw std::invalid_argument("propagate_moments: up_to must be >= 1");
  const int n = map.dim();
  if (!component_units.empty() && static_cast<int>(component_units.size()) != n)
    throw std::invalid_argument("propagate_moments: component_units length mismatches map dimension");

  MomentSet out;
  out.map_order = map.order();
  out.central_order = std::max(2, up_to);
  out.labels.assign(component_labels.begin(), component_labels.end());
  out.unit_scale.assign(component_units.begin(), component_units.end());

  MomentCache cache(moments, map.nvars());
  out.mean.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.mean[static_cast<std::size_t>(i)] = expected_value_cached(map.component(i), cache);
  if (up_to < 2) return out;

  // Center first, multiply second: E[(X-mu)(Y-nu)] computed on centered
  // polynomials avoids the cancellation of subtracting two large raw moments
  // when the components carry big constant parts.
  std::vector<TPoly> centered;
  centered.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    TPoly c = map.component(i);
    c -= out.mean[static_cast<std::size_t>(i)];
    centered.push_back(std::move(c));
  }

  out.covariance.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double cij =
          expected_value_cached(polyalg::mul_exact(centered[static_cast<std::size_t>(i)],
                                                   centered[static_cast<std::size_t>(j)]),
                                cache);
      out.covariance[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = cij;
      out.covariance[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = cij;
    }
  for (int i = 0; i < n; ++i) {
    double& v = out.covariance[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    if (v < 0.0 && v >= -1e-12) {
      v = 0.0;
      out.variance_clamped = true;
    }
  }

  if (up_to >= 3) {
    out.central.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto& row = out.central[static_cast<std::size_t>(i)];
      row.reserve(static_cast<std::size_t>(up_to - 2));
      for (int q = 3; q <= up_to; ++q)
        row.push_back(expected_value_cached(polyalg::pow_exact(centered[static_cast<std::size_t>(i)], q), cache));
    }
  }
  return out;
}

MomentSet propagate_moments(const polyalg::TaylorMap& map, const UniformBox& box, int up_to,
                            std::span<const double> component_units, std::span<const std::string> component_labels) {
  box.validate();
  if (box.dim() != map.nvars())
    throw std::invalid_argument("propagate_moments: box dimension mismatches map variables");
  if (!box.labels.empty() && box.labels != map.var_labels())
    throw std::invalid_argument("propagate_moments: box labels mismatch map variable labels");

  MomentSet out = propagate_moments(map, uniform_moments(box), up_to, component_units, component_labels);

  // Advisory containment check: the polynomial moments below are exact either
  // way, but outside the estimated radius the map itself stops being a
  // faithful surrogate of the flow.
  const auto sweep = per_state_radius_sweep(map, map.order());
  std::vector<double> r_min(static_cast<std::size_t>(map.nvars()), std::numeric_limits<double>::infinity());
  for (const SweepEntry& e : sweep)
    r_min[static_cast<std::size_t>(e.variable)] = std::min(r_min[static_cast<std::size_t>(e.variable)], e.headline());
  for (int i = 0; i < box.dim(); ++i) {
    const double reach = std::max(std::abs(box.lo[static_cast<std::size_t>(i)]),
                                  std::abs(box.hi[static_cast<std::size_t>(i)]));
    if (reach > r_min[static_cast<std::size_t>(i)]) out.radius_warning = true;
  }
  return out;
}

std::vector<double> MomentSet::mean_physical() const {
  std::vector<double> m = mean;
  if (!unit_scale.empty())
    for (std::size_t i = 0; i < m.size(); ++i) m[i] *= unit_scale[i];
  return m;
}

std::vector<double> MomentSet::covariance_physical() const {
  std::vector<double> c = covariance;
  if (!unit_scale.empty() && !c.empty()) {
    const std::size_t n = mean.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] *= unit_scale[i] * unit_scale[j];
  }
  return c;
}

}  // namespace ettk::uncert
