#pragma once
/**
 * @file fit.hpp
 * @brief Fitting periodic-activation event networks to signed boundary data.
 *
 * Trains a small sin-activated MLP (linear head) on (point, signed value)
 * pairs by full-batch Adam with analytic gradients. Everything is
 * deterministic in the seed: initialization, the holdout split, and the
 * optimizer trajectory. The resulting net is raw-wired and plugs directly
 * into EventSpec::neural.
 */

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ettk/netpoly/policy_net.hpp"

namespace ettk::eventmap {

struct FitOptions {
  std::vector<int> hidden = {11};  // layer widths between input (3) and output (1)
  double w0 = 1.0;                 // sin frequency factor
  int iterations = 4000;
  double learning_rate = 1.0e-2;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1.0e-8;
  int min_samples_per_param = 10;
};

struct FitResult {
  netpoly::PolicyNet net;
  double train_mse = 0.0;
  double holdout_mse = 0.0;
  double holdout_rmse = 0.0;
  long param_count = 0;
};

/// Fit e(p) ~ labels over 3-D points. Throws std::invalid_argument when the
/// sample budget is below min_samples_per_param * parameter count, and
/// numerical_error (citing seed and learning rate) if the loss diverges.
[[nodiscard]] FitResult fit_event_net(std::span<const std::array<double, 3>> points, std::span<const double> labels,
                                      const FitOptions& opts = {});

}  // namespace ettk::eventmap
