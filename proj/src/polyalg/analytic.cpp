#include "ettk/polyalg/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ettk::polyalg {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Truncated univariate convolution index j of c with itself.
double self_conv(const std::vector<double>& c, int j) {
  double s = 0.0;
  for (int i = 0; i <= j; ++i) s += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j - i)];
  return s;
}

}  // namespace

std::vector<double> analytic_series(AnalyticFn f, double a0, int k, double param) {
  if (k < 1) throw std::invalid_argument("analytic_series: order must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
  switch (f) {
    case AnalyticFn::sin: {
      // Derivatives cycle through sin, cos, -sin, -cos.
      const double s = std::sin(a0), co = std::cos(a0);
      double fact = 1.0;
      for (int j = 0; j <= k; ++j) {
        if (j > 0) fact *= static_cast<double>(j);
        const double d = (j % 4 == 0) ? s : (j % 4 == 1) ? co : (j % 4 == 2) ? -s : -co;
        c[static_cast<std::size_t>(j)] = d / fact;
      }
      return c;
    }
    case AnalyticFn::cos: {
      const double s = std::sin(a0), co = std::cos(a0);
      double fact = 1.0;
      for (int j = 0; j <= k; ++j) {
        if (j > 0) fact *= static_cast<double>(j);
        const double d = (j % 4 == 0) ? co : (j % 4 == 1) ? -s : (j % 4 == 2) ? -co : s;
        c[static_cast<std::size_t>(j)] = d / fact;
      }
      return c;
    }
    case AnalyticFn::exp: {
      const double e = std::exp(a0);
      c[0] = e;
      for (int j = 1; j <= k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j) - 1] / static_cast<double>(j);
      return c;
    }
    case AnalyticFn::log: {
      if (!(a0 > 0.0)) throw std::invalid_argument("analytic_series: log requires constant part > 0, got " + std::to_string(a0));
      c[0] = std::log(a0);
      double p = 1.0;  // (-1)^{j+1} a0^{-j}
      for (int j = 1; j <= k; ++j) {
        p /= -a0;
        c[static_cast<std::size_t>(j)] = -p / static_cast<double>(j);
      }
      return c;
    }
    case AnalyticFn::sqrt: {
      if (!(a0 > 0.0)) throw std::invalid_argument("analytic_series: sqrt requires constant part > 0, got " + std::to_string(a0));
      c[0] = std::sqrt(a0);
      for (int j = 1; j <= k; ++j)
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j) - 1] * (1.5 - static_cast<double>(j)) / (static_cast<double>(j) * a0);
      return c;
    }
    case AnalyticFn::recip: {
      if (a0 == 0.0) throw std::invalid_argument("analytic_series: recip requires nonzero constant part");
      c[0] = 1.0 / a0;
      for (int j = 1; j <= k; ++j) c[static_cast<std::size_t>(j)] = -c[static_cast<std::size_t>(j) - 1] / a0;
      return c;
    }
    case AnalyticFn::pow: {
      const double p = param;
      const double pr = std::round(p);
      if (pr == p && pr >= 0.0 && pr <= 64.0) {
        // Non-negative integer exponent: finite binomial series, any a0.
        c[0] = (p == 0.0) ? 1.0 : std::pow(a0, p);
        double coef = c[0];
        for (int j = 1; j <= k; ++j) {
          const double num = p - static_cast<double>(j - 1);
          if (num == 0.0 || a0 == 0.0) {
            // Tail is exactly zero (or expansion about zero of an integer
            // power: c_j = delta_{j,p}).
            for (int jj = j; jj <= k; ++jj) c[static_cast<std::size_t>(jj)] = 0.0;
            if (a0 == 0.0 && p >= 1.0 && p <= static_cast<double>(k)) c[static_cast<std::size_t>(static_cast<int>(p))] = 1.0;
            break;
          }
          coef = coef * num / (static_cast<double>(j) * a0);
          c[static_cast<std::size_t>(j)] = coef;
        }
        return c;
      }
      if (!(a0 > 0.0)) throw std::invalid_argument("analytic_series: pow with non-integer exponent requires constant part > 0");
      c[0] = std::pow(a0, p);
      for (int j = 1; j <= k; ++j)
        c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j) - 1] * (p - static_cast<double>(j - 1)) / (static_cast<double>(j) * a0);
      return c;
    }
    case AnalyticFn::tanh: {
      // g' = 1 - g^2 term-by-term: (j+1) c_{j+1} = delta_{j0} - (c*c)_j.
      c[0] = std::tanh(a0);
      for (int j = 0; j < k; ++j) {
        const double rhs = (j == 0 ? 1.0 : 0.0) - self_conv(c, j);
        c[static_cast<std::size_t>(j) + 1] = rhs / static_cast<double>(j + 1);
      }
      return c;
    }
    case AnalyticFn::sigmoid: {
      // g' = g - g^2: (j+1) c_{j+1} = c_j - (c*c)_j.
      c[0] = stable_sigmoid(a0);
      for (int j = 0; j < k; ++j)
        c[static_cast<std::size_t>(j) + 1] = (c[static_cast<std::size_t>(j)] - self_conv(c, j)) / static_cast<double>(j + 1);
      return c;
    }
    case AnalyticFn::softplus: {
      // softplus' = sigmoid: integrate the sigmoid series termwise.
      std::vector<double> s = analytic_series(AnalyticFn::sigmoid, a0, k);
      c[0] = (a0 > 0.0) ? a0 + std::log1p(std::exp(-a0)) : std::log1p(std::exp(a0));
      for (int j = 1; j <= k; ++j) c[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j) - 1] / static_cast<double>(j);
      return c;
    }
  }
  throw std::invalid_argument("analytic_series: unknown function tag");
}

TPoly analytic_apply(AnalyticFn f, const TPoly& a, double param) {
  a.check_valid();
  const int k = a.order();
  const double a0 = a.coeff0();
  const std::vector<double> c = analytic_series(f, a0, k, param);
  TPoly h = a;          // nilpotent part a - a0
  h.set_coeff0(0.0);
  TPoly acc = constant_like(a, c[static_cast<std::size_t>(k)]);
  for (int j = k - 1; j >= 0; --j) {
    acc = acc * h;
    acc += c[static_cast<std::size_t>(j)];
  }
  return acc;
}

TPoly sin(const TPoly& a) { return analytic_apply(AnalyticFn::sin, a); }
TPoly cos(const TPoly& a) { return analytic_apply(AnalyticFn::cos, a); }
TPoly exp(const TPoly& a) { return analytic_apply(AnalyticFn::exp, a); }
TPoly log(const TPoly& a) { return analytic_apply(AnalyticFn::log, a); }
TPoly sqrt(const TPoly& a) { return analytic_apply(AnalyticFn::sqrt, a); }
TPoly recip(const TPoly& a) { return analytic_apply(AnalyticFn::recip, a); }
TPoly pow(const TPoly& a, double p) { return analytic_apply(AnalyticFn::pow, a, p); }
TPoly tanh(const TPoly& a) { return analytic_apply(AnalyticFn::tanh, a); }
TPoly sigmoid(const TPoly& a) { return analytic_apply(AnalyticFn::sigmoid, a); }
TPoly softplus(const TPoly& a) { return analytic_apply(AnalyticFn::softplus, a); }

TPoly constant_like(const TPoly& like, double value) {
  like.check_valid();
  return TPoly::constant(like.nvars(), like.order(), value);
}

}  // namespace ettk::polyalg
