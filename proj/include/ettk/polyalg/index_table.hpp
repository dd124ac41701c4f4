#pragma once
/**
 * @file index_table.hpp
 * @brief Shared multi-index enumeration for dense truncated polynomials.
 *
 * Multi-indices alpha in N^n with |alpha| <= order are enumerated in graded
 * lexicographic order: ascending total degree, and descending lexicographic
 * within a degree (so (d,0,...,0) opens degree d). Every polynomial on the
 * same (nvars, order) pair shares one immutable table, so coefficient slots
 * align across operands and ranks can be computed combinatorially without
 * searching.
 */

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace ettk::polyalg {

class IndexTable {
 public:
  /// Fetch (or build and cache) the table for a given variable count and
  /// truncation order. Thread-safe; returned tables are immutable.
  static std::shared_ptr<const IndexTable> get(int nvars, int order);

  [[nodiscard]] int nvars() const { return nvars_; }
  [[nodiscard]] int order() const { return order_; }

  /// Total number of multi-indices with |alpha| <= order.
  [[nodiscard]] std::size_t size() const { return degrees_.size(); }

  /// First rank of the given total degree; offset(order+1) == size().
  [[nodiscard]] std::size_t offset(int degree) const { return offsets_[static_cast<std::size_t>(degree)]; }

  /// Number of multi-indices of exactly the given total degree.
  [[nodiscard]] std::size_t degree_count(int degree) const {
    return offsets_[static_cast<std::size_t>(degree) + 1] - offsets_[static_cast<std::size_t>(degree)];
  }

  /// Total degree |alpha| of the multi-index at a rank.
  [[nodiscard]] int degree(std::size_t rank) const { return degrees_[rank]; }

  /// Exponent vector of the multi-index at a rank.
  [[nodiscard]] std::span<const std::uint8_t> exponents(std::size_t rank) const {
    return {exps_.data() + rank * static_cast<std::size_t>(nvars_), static_cast<std::size_t>(nvars_)};
  }

  /// Graded-lex rank of an exponent vector (must satisfy |alpha| <= order).
  [[nodiscard]] std::size_t rank(std::span<const std::uint8_t> alpha) const;

  /// ln(alpha!) for the multi-index at a rank, precomputed for radius weights.
  [[nodiscard]] double log_factorial(std::size_t rank) const { return log_fact_[rank]; }

  IndexTable(const IndexTable&) = delete;
  IndexTable& operator=(const IndexTable&) = delete;

 private:
  IndexTable(int nvars, int order);

  [[nodiscard]] std::uint64_t binom(int n, int k) const;

  int nvars_;
  int order_;
  std::vector<std::size_t> offsets_;     // order+2 entries
  std::vector<std::uint8_t> degrees_;    // per rank
  std::vector<std::uint8_t> exps_;       // nvars entries per rank, contiguous
  std::vector<double> log_fact_;         // per rank
  std::vector<std::uint64_t> binom_;     // (rows) x (cols) binomial table
  int binom_cols_;
};

}  // namespace ettk::polyalg
