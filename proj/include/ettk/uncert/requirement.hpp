#pragma once
/**
 * @file requirement.hpp
 * @brief Probabilistic requirement checks on propagated moments.
 *
 * Verifies statements of the form "at least p of scenarios satisfy the
 * terminal-state predicate" by sampling a Gaussian fitted to the propagated
 * mean and covariance of a component subset. The Gaussian is an assumption
 * layered on top of the exact moments (only the first two are matched); the
 * result carries that caveat explicitly.
 */

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "ettk/uncert/moments.hpp"

namespace ettk::uncert {

/// Euclidean norm bound over the selected components: ||x|| <= bound.
struct NormPredicate {
  double bound = 0.0;
};

/// Componentwise box: lo[i] <= x[i] <= hi[i] over the selected components.
struct BoxPredicate {
  std::vector<double> lo;
  std::vector<double> hi;
};

using Predicate = std::variant<NormPredicate, BoxPredicate>;

struct RequirementResult {
  double fraction = 0.0;
  double std_error = 0.0;  // binomial sqrt(p(1-p)/n)
  long satisfied = 0;
  long n_samples = 0;
  std::uint64_t seed = 0;
  bool gaussian_assumption = true;  // only mean and covariance of the true law are matched
};

/// Fraction of Gaussian samples over the component subset satisfying the
/// predicate. Sampling happens in physical units when the MomentSet carries
/// unit scales, so predicate thresholds are physical. Deterministic in
/// (seed, sample index): partitioning the samples cannot change the result.
/// Throws numerical_error when the subset covariance is indefinite beyond a
/// small clamp tolerance.
[[nodiscard]] RequirementResult requirement_check(const MomentSet& moments, std::span<const int> components,
                                                  const Predicate& predicate, long n_samples, std::uint64_t seed);

}  // namespace ettk::uncert
