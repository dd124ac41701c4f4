#pragma once
/**
 * @file trajectory.hpp
 * @brief Scalar trajectories with dense output.
 */

#include <span>
#include <vector>

#include "ettk/dynamics/model.hpp"
#include "ettk/jetflow/stepper.hpp"

namespace ettk::jetflow {

struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  DenseData<double> rcont;  // per component
};

/// Accepted-step skeleton of a scalar integration plus the per-step
/// interpolant, so states anywhere on [t0, t_final] query in O(log steps).
struct Trajectory {
  std::vector<double> times;                  // step endpoints, times[0] = t0
  std::vector<std::vector<double>> states;    // states at those endpoints
  std::vector<DenseSegment> segments;         // times.size() - 1 entries
  IntegrateStats stats;

  [[nodiscard]] double t_start() const { return times.front(); }
  [[nodiscard]] double t_final() const { return times.back(); }
  [[nodiscard]] const std::vector<double>& final_state() const { return states.back(); }

  /// Interpolated state at t (clamped to [t_start, t_final]).
  [[nodiscard]] std::vector<double> state_at(double t) const;
};

/// Integrate the closed loop over a fixed horizon [0, t_end] (internal time
/// units), recording every accepted step.
[[nodiscard]] Trajectory integrate(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                                   std::span<const double> x0, double t_end, const IntegrateOptions& opts = {},
                                   const dynamics::ParamJets<double>* overrides = nullptr);

}  // namespace ettk::jetflow
