#pragma once
/**
 * @file tpoly.hpp
 * @brief Truncated multivariate Taylor polynomials (the jet algebra).
 *
 * A TPoly is a polynomial in nvars perturbation variables truncated at a
 * fixed total degree. Coefficients live in a dense vector indexed by the
 * shared graded-lex IndexTable, so ring operations are branch-light loops
 * over aligned slots. Operands must share (nvars, order); mixing algebras is
 * an error, never a silent promotion.
 */

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "ettk/polyalg/index_table.hpp"

namespace ettk::polyalg {

class TPoly {
 public:
  /// Invalid placeholder (for containers); any arithmetic on it throws.
  TPoly() = default;

  /// The constant polynomial v in the (nvars, order) algebra.
  static TPoly constant(int nvars, int order, double value);

  /// The first-order monomial `scale * x_var`.
  static TPoly variable(int nvars, int order, int var, double scale = 1.0);

  [[nodiscard]] bool valid() const { return table_ != nullptr; }
  [[nodiscard]] int nvars() const { return table_->nvars(); }
  [[nodiscard]] int order() const { return table_->order(); }
  [[nodiscard]] const IndexTable& table() const { return *table_; }
  [[nodiscard]] std::shared_ptr<const IndexTable> table_ptr() const { return table_; }

  [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }
  [[nodiscard]] std::span<double> coeffs() { return {coeffs_.data(), coeffs_.size()}; }

  /// Coefficient of the multi-index alpha (|alpha| <= order required).
  [[nodiscard]] double coeff(std::span<const int> alpha) const;
  void set_coeff(std::span<const int> alpha, double value);

  /// Constant (|alpha| = 0) coefficient.
  [[nodiscard]] double coeff0() const { return coeffs_[0]; }
  void set_coeff0(double v) { coeffs_[0] = v; }

  /// Largest total degree with a nonzero coefficient; -1 for the zero poly.
  [[nodiscard]] int top_degree() const;

  /// max |coefficient| over total degree d (0 if the slice is empty).
  [[nodiscard]] double max_abs_on_degree(int d) const;

  /// Nonzero terms of exact total degree d as (rank, coefficient) pairs.
  [[nodiscard]] std::vector<std::pair<std::size_t, double>> degree_slice(int d) const;

  TPoly& operator+=(const TPoly& rhs);
  TPoly& operator-=(const TPoly& rhs);
  TPoly& operator+=(double rhs) { check_valid(); coeffs_[0] += rhs; return *this; }
  TPoly& operator-=(double rhs) { check_valid(); coeffs_[0] -= rhs; return *this; }
  TPoly& operator*=(double rhs);
  TPoly& operator/=(double rhs) { return (*this) *= (1.0 / rhs); }
  TPoly& operator*=(const TPoly& rhs) { *this = (*this) * rhs; return *this; }

  friend TPoly operator+(TPoly a, const TPoly& b) { a += b; return a; }
  friend TPoly operator-(TPoly a, const TPoly& b) { a -= b; return a; }
  friend TPoly operator+(TPoly a, double b) { a += b; return a; }
  friend TPoly operator+(double a, TPoly b) { b += a; return b; }
  friend TPoly operator-(TPoly a, double b) { a -= b; return a; }
  friend TPoly operator-(double a, TPoly b) { b *= -1.0; b += a; return b; }
  friend TPoly operator*(TPoly a, double b) { a *= b; return a; }
  friend TPoly operator*(double a, TPoly b) { b *= a; return b; }
  friend TPoly operator/(TPoly a, double b) { a /= b; return a; }
  friend TPoly operator-(TPoly a) { a *= -1.0; return a; }

  /// Truncated product: terms beyond the shared order are dropped.
  friend TPoly operator*(const TPoly& a, const TPoly& b);

  /// Evaluate at a point (plain polynomial evaluation, deterministic order).
  [[nodiscard]] double eval(std::span<const double> point) const;

  /// Restrict to terms of total degree <= new_order (same algebra by default,
  /// or re-homed into the (nvars, new_order) algebra when shrink = true).
  [[nodiscard]] TPoly truncated(int new_order, bool shrink = false) const;

  void check_valid() const {
    if (!table_) throw std::invalid_argument("TPoly: operation on default-constructed polynomial");
  }

 private:
  TPoly(std::shared_ptr<const IndexTable> table, double c0);

  static const IndexTable& require_same(const TPoly& a, const TPoly& b);

  std::shared_ptr<const IndexTable> table_;
  std::vector<double> coeffs_;
};

/// d/dx_var, truncated algebra unchanged.
[[nodiscard]] TPoly derivative(const TPoly& p, int var);

/// Antiderivative in x_var with zero constant of integration; source terms of
/// total degree == order are dropped by truncation.
[[nodiscard]] TPoly antiderivative(const TPoly& p, int var);

/// Substitute replacement for x_var (Horner in x_var, truncated products).
/// replacement must live in the same algebra as p.
[[nodiscard]] TPoly substitute(const TPoly& p, int var, const TPoly& replacement);

/// Exact product in the (nvars, a.order + b.order) algebra; no truncation.
[[nodiscard]] TPoly mul_exact(const TPoly& a, const TPoly& b);

/// Exact n-th power (repeated exact products), result order = p.order * n.
[[nodiscard]] TPoly pow_exact(const TPoly& p, int n);

/// Re-home into a wider algebra (new_nvars >= nvars append fresh variables,
/// new_order >= order). Coefficients are preserved.
[[nodiscard]] TPoly promote(const TPoly& p, int new_nvars, int new_order);

/// Remove variable var; every term with a nonzero exponent on var must be
/// zero (checked), the rest re-rank into the (nvars-1, order) algebra.
[[nodiscard]] TPoly drop_variable(const TPoly& p, int var);

/// Multivariate composition p(q_0, ..., q_{n-1}); the q_i share some common
/// algebra which becomes the algebra of the result. Constant parts of q_i are
/// allowed (this is evaluation with polynomial-valued points).
[[nodiscard]] TPoly compose(const TPoly& p, std::span<const TPoly> args);

/// Weighted jet magnitude |c_0| + sum_d rho^d max_{|alpha|=d}|c_alpha|,
/// the scalar proxy the adaptive stepper controls against.
[[nodiscard]] double jet_magnitude(const TPoly& p, double rho = 0.5);

}  // namespace ettk::polyalg
