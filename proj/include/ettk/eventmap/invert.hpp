#pragma once
/**
 * @file invert.hpp
 * @brief Trigger-time inversion and event transition maps.
 *
 * Given a flow expansion over (delta, dt) and an event e, the scalar
 * composition E(delta, dt) = e(flow) vanishes on the crossing; the trigger
 * time T(delta) is the polynomial solving E(delta, T(delta)) = 0, T(0) = 0,
 * obtained by formal Newton iteration T <- T - E(delta,T)/E_dt(delta,T).
 * Each iteration doubles the correct degree, so ceil(log2(k+1)) + 1 sweeps
 * reach the order-k fixed point. Substituting T for dt in the flow and
 * eliminating dt yields the event transition map: the terminal state on the
 * manifold as a polynomial in the initial perturbations alone.
 */

#include <string>
#include <vector>

#include "ettk/eventmap/detect.hpp"
#include "ettk/eventmap/event_spec.hpp"
#include "ettk/jetflow/expand.hpp"

namespace ettk::eventmap {

struct EventTransitionMap {
  polyalg::TaylorMap state_map;      // terminal state over the delta variables
  polyalg::TPoly trigger_time;       // T(delta), internal time units, T(0) = 0
  double t_star = 0.0;               // nominal crossing epoch (internal units)
  double e_slope = 0.0;              // de/dt at the nominal crossing
  double newton_residual = 0.0;      // max |coeff| of E(delta, T)/scale(E)
  int order = 0;
  std::string model_name;
  std::vector<jetflow::ExpandVar> vars;
  std::vector<double> var_unit_physical;   // SI perturbation per variable unit
  std::vector<double> comp_unit_physical;  // SI value per internal unit, per component
  std::vector<std::string> comp_labels;

  [[nodiscard]] std::vector<double> nominal_state() const { return state_map.constant_part(); }
};

/// Invert the scalar event composition E for the trigger time. `flow` must
/// carry the dt variable and be expanded about an epoch on the manifold.
/// Returns T in the full (delta, dt) algebra (dt-free) plus diagnostics.
struct TriggerInversion {
  polyalg::TPoly trigger_time;  // (delta, dt) algebra, no dt dependence
  double e_slope = 0.0;
  double residual = 0.0;        // scaled max |coeff| of E(delta, T)
};
[[nodiscard]] TriggerInversion invert_trigger_time(const jetflow::FlowExpansion& flow, const EventSpec& spec);

/// Full composition: trigger-time inversion + substitution into the flow.
[[nodiscard]] EventTransitionMap event_transition_map(const jetflow::FlowExpansion& flow, const EventSpec& spec);

struct EventPipelineResult {
  EventIntegration nominal;     // scalar integration + refined crossing
  jetflow::FlowExpansion flow;  // over (delta, dt) about the crossing epoch
  EventTransitionMap ett;
};

/// End-to-end: locate the nominal crossing, transport the jet to it, invert
/// the trigger time and build the event transition map.
[[nodiscard]] EventPipelineResult expand_to_event(const dynamics::DynamicsModel& model,
                                                  const netpoly::PolicyNet* policy, std::span<const double> x0,
                                                  std::span<const jetflow::ExpandVar> vars, int order,
                                                  const EventSpec& spec, double horizon,
                                                  const jetflow::IntegrateOptions& opts = {});

}  // namespace ettk::eventmap
