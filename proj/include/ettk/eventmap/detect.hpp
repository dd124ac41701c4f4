#pragma once
/**
 * @file detect.hpp
 * @brief Event crossing detection and refinement on dense trajectories.
 *
 * Each accepted step is sampled at its endpoints plus interior points; the
 * first sign change honoring the crossing direction is bisected on the dense
 * interpolant down to machine-width brackets. When no crossing exists, every
 * segment is minimized for |e| to distinguish a tangential graze from a
 * clean miss.
 */

#include <optional>
#include <vector>

#include "ettk/eventmap/event_spec.hpp"
#include "ettk/jetflow/trajectory.hpp"

namespace ettk::eventmap {

struct EventHit {
  double t_star = 0.0;            // internal time units
  std::vector<double> state;      // interpolated state at the crossing
  double e_slope = 0.0;           // de/dt at the crossing
  double e_residual = 0.0;        // |e| at the refined crossing
};

struct DetectResult {
  enum class Status { hit, miss, graze };
  Status status = Status::miss;
  std::optional<EventHit> hit;
  double min_abs_e = 0.0;  // over the scanned horizon (miss/graze diagnostics)
  double t_min_abs = 0.0;
};

/// Scan a recorded trajectory for the first admissible crossing.
[[nodiscard]] DetectResult detect(const jetflow::Trajectory& traj, const EventSpec& spec);

struct EventIntegration {
  jetflow::Trajectory trajectory;  // full accepted steps (last one contains the crossing)
  DetectResult detection;
};

/// Integrate the closed loop until the event fires or the horizon ends.
/// The trajectory always holds whole accepted steps; the refined crossing
/// lives in detection.hit.
[[nodiscard]] EventIntegration integrate_to_event(const dynamics::DynamicsModel& model,
                                                  const netpoly::PolicyNet* policy, std::span<const double> x0,
                                                  const EventSpec& spec, double horizon,
                                                  const jetflow::IntegrateOptions& opts = {},
                                                  const dynamics::ParamJets<double>* overrides = nullptr);

/// Same, but statuses become exceptions: miss -> event_miss_error, graze ->
/// grazing_error. Returns the integration with a guaranteed hit.
[[nodiscard]] EventIntegration integrate_to_event_or_throw(const dynamics::DynamicsModel& model,
                                                           const netpoly::PolicyNet* policy,
                                                           std::span<const double> x0, const EventSpec& spec,
                                                           double horizon,
                                                           const jetflow::IntegrateOptions& opts = {},
                                                           const dynamics::ParamJets<double>* overrides = nullptr);

}  // namespace ettk::eventmap
