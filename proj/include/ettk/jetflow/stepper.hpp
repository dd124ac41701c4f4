#pragma once
/**
 * @file stepper.hpp
 * @brief Adaptive Dormand-Prince 5(4) core, generic over the state algebra.
 *
 * The same template integrates plain states and polynomial jets: the only
 * algebra-specific hook is the magnitude used for error control. For jets
 * that magnitude is |c_0| + sum_d rho^d max_{|alpha|=d}|c_alpha|, so
 * higher-degree coefficient error is controlled with geometrically damped
 * weight instead of being ignored.
 *
 * Dense output is the standard quartic interpolant of this pair; it is built
 * only when requested (trajectory recording, event scanning).
 */

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ettk/dynamics/model.hpp"
#include "ettk/errors.hpp"
#include "ettk/polyalg/tpoly.hpp"

namespace ettk::jetflow {

struct IntegrateOptions {
  double rtol = 1.0e-12;
  double atol = 1.0e-12;
  double jet_rho = 0.5;        // degree damping in the jet magnitude
  long max_steps = 2'000'000;  // accepted + rejected
  double safety = 0.9;
  double fac_min = 0.2;
  double fac_max = 5.0;
  bool dense = false;          // build the interpolant per accepted step
};

struct IntegrateStats {
  long steps_accepted = 0;
  long steps_rejected = 0;
  long rhs_evals = 0;
};

namespace detail {

inline double state_mag(double v, double /*rho*/) { return std::abs(v); }
inline double state_mag(const polyalg::TPoly& p, double rho) { return polyalg::jet_magnitude(p, rho); }

}  // namespace detail

/// Dense-output coefficients for one accepted step: y(t0 + theta h) =
/// r[0] + theta (r[1] + (1-theta)(r[2] + theta (r[3] + (1-theta) r[4]))).
template <class T>
using DenseData = std::vector<std::array<T, 5>>;

/**
 * Integrate dy/dt = rhs(y) from t0 to t_end (t_end > t0). After each
 * accepted step, on_step(t_old, h, y_new, dense_or_null) runs; returning
 * false stops the integration early (y keeps the end-of-step value).
 *
 * Throws numerical_error on step-size collapse or step-budget exhaustion.
 */
template <class T, class StepCb>
IntegrateStats integrate_adaptive(const dynamics::RhsFn<T>& rhs, std::vector<T>& y, double t0, double t_end,
                                  const IntegrateOptions& opts, StepCb&& on_step) {
  // Stage times are not needed: the closed-loop systems here are autonomous
  // (RhsFn takes no time argument), so only the a/e/d coefficients appear.
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  if (!(t_end > t0)) throw std::invalid_argument("integrate_adaptive: t_end must exceed t0");
  const std::size_t n = y.size();
  IntegrateStats stats;

  std::vector<T> k1(y), k2(y), k3(y), k4(y), k5(y), k6(y), k7(y), ytmp(y), ynew(y), yerr(y);
  auto eval = [&](const std::vector<T>& arg, std::vector<T>& out) {
    rhs(std::span<const T>(arg.data(), n), std::span<T>(out.data(), n));
    ++stats.rhs_evals;
  };

  auto sc = [&](std::size_t i) {
    const double m0 = detail::state_mag(y[i], opts.jet_rho);
    const double m1 = detail::state_mag(ynew[i], opts.jet_rho);
    return opts.atol + opts.rtol * std::max(m0, m1);
  };

  eval(y, k1);

  // Crude initial step from first-derivative magnitudes, then let the
  // controller take over.
  double h;
  {
    double d0 = 0.0, dd1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = opts.atol + opts.rtol * detail::state_mag(y[i], opts.jet_rho);
      const double ym = detail::state_mag(y[i], opts.jet_rho) / s;
      const double fm = detail::state_mag(k1[i], opts.jet_rho) / s;
      d0 += ym * ym;
      dd1 += fm * fm;
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    dd1 = std::sqrt(dd1 / static_cast<double>(n));
    h = (dd1 > 1e-10) ? 0.01 * std::max(d0, 1e-5) / dd1 : 1e-6 * (t_end - t0);
    h = std::min(h, t_end - t0);
  }

  double t = t0;
  bool fsal_valid = true;
  DenseData<T> dense;
  while (t < t_end) {
    if (stats.steps_accepted + stats.steps_rejected >= opts.max_steps)
      throw numerical_error("integrate_adaptive: step budget exhausted at t=" + std::to_string(t));
    const double hmin = 1e-14 * std::max(1.0, std::abs(t));
    if (h < hmin)
      throw numerical_error("integrate_adaptive: step size collapsed at t=" + std::to_string(t));
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }

    if (!fsal_valid) eval(y, k1);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + k1[i] * (a21 * h);
    eval(ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + k1[i] * (a31 * h) + k2[i] * (a32 * h);
    eval(ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + k1[i] * (a41 * h) + k2[i] * (a42 * h) + k3[i] * (a43 * h);
    eval(ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + k1[i] * (a51 * h) + k2[i] * (a52 * h) + k3[i] * (a53 * h) + k4[i] * (a54 * h);
    eval(ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + k1[i] * (a61 * h) + k2[i] * (a62 * h) + k3[i] * (a63 * h) + k4[i] * (a64 * h) +
                k5[i] * (a65 * h);
    eval(ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + k1[i] * (a71 * h) + k3[i] * (a73 * h) + k4[i] * (a74 * h) + k5[i] * (a75 * h) +
                k6[i] * (a76 * h);
    eval(ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      yerr[i] = k1[i] * (e1 * h) + k3[i] * (e3 * h) + k4[i] * (e4 * h) + k5[i] * (e5 * h) + k6[i] * (e6 * h) +
                k7[i] * (e7 * h);
      const double q = detail::state_mag(yerr[i], opts.jet_rho) / sc(i);
      err += q * q;
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (!std::isfinite(err)) {
      // Poisoned stage (overflow/NaN escaped the rhs): retry smaller.
      ++stats.steps_rejected;
      fsal_valid = true;  // k1 still holds rhs(y)
      h *= 0.25;
      continue;
    }

    if (err <= 1.0) {
      if (opts.dense) {
        dense.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          T ydiff = ynew[i] - y[i];
          T bspl = k1[i] * h - ydiff;
          dense[i][0] = y[i];
          dense[i][1] = ydiff;
          dense[i][2] = bspl;
          dense[i][3] = ydiff - k7[i] * h - bspl;
          dense[i][4] = (k1[i] * d1 + k3[i] * d3 + k4[i] * d4 + k5[i] * d5 + k6[i] * d6 + k7[i] * d7) * h;
        }
      }
      const double t_old = t;
      t = last ? t_end : t + h;
      std::swap(y, ynew);
      std::swap(k1, k7);  // FSAL
      fsal_valid = true;
      ++stats.steps_accepted;
      const double h_used = t - t_old;
      double fac = opts.safety * std::pow(err > 1e-30 ? err : 1e-30, -0.2);
      fac = std::min(opts.fac_max, std::max(opts.fac_min, fac));
      h = h_used * fac;
      if (!on_step(t_old, h_used, y, opts.dense ? &dense : nullptr)) return stats;
    } else {
      ++stats.steps_rejected;
      fsal_valid = true;
      double fac = opts.safety * std::pow(err, -0.2);
      fac = std::min(1.0, std::max(opts.fac_min, fac));
      h *= fac;
    }
  }
  return stats;
}

/// Evaluate the dense interpolant of one component at fraction theta of the
/// step ([0, 1]).
template <class T>
[[nodiscard]] T dense_eval(const std::array<T, 5>& r, double theta) {
  const double th1 = 1.0 - theta;
  return r[0] + (r[1] + (r[2] + (r[3] + r[4] * th1) * theta) * th1) * theta;
}

}  // namespace ettk::jetflow
