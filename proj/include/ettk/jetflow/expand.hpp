#pragma once
/**
 * @file expand.hpp
 * @brief Jet transport: the flow as a Taylor map of initial perturbations.
 *
 * expand_flow integrates the closed loop with polynomial-valued states whose
 * degree-1 seeds are the chosen perturbation variables (initial-state
 * components and/or SI physical parameters). expand_flow_with_time appends a
 * final perturbation variable "dt" for the evaluation epoch: the map is
 * extended about the nominal endpoint by Picard iteration, y <- x(T) +
 * integral_0^dt f(y), which converges to the order-k fixed point in k sweeps
 * because each sweep raises the first incorrect dt-degree by one.
 */

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ettk/dynamics/model.hpp"
#include "ettk/jetflow/stepper.hpp"
#include "ettk/polyalg/taylor_map.hpp"

namespace ettk::jetflow {

/// One expansion variable: either initial-state component `index` (seed in
/// internal units) or physical parameter `param` (seed in SI units of that
/// parameter). A unit of the variable perturbs by `scale`.
struct ExpandVar {
  enum class Kind { state, param };
  Kind kind = Kind::state;
  int index = 0;
  std::string param;
  double scale = 1.0;

  static ExpandVar state(int index, double scale = 1.0) { return {Kind::state, index, {}, scale}; }
  static ExpandVar parameter(std::string name, double scale = 1.0) {
    return {Kind::param, -1, std::move(name), scale};
  }
};

struct FlowExpansion {
  polyalg::TaylorMap map;          // components = state, over delta vars (+ "dt" last when has_time)
  bool has_time = false;
  double t_nom = 0.0;              // internal time units
  int order = 0;
  std::string model_name;
  std::vector<ExpandVar> vars;
  std::vector<double> var_unit_physical;   // SI perturbation per unit of each map variable
  std::vector<double> comp_unit_physical;  // SI value per internal unit of each component
  std::vector<std::string> comp_labels;
  IntegrateStats stats;

  [[nodiscard]] int nvars() const { return map.nvars(); }
  /// Perturbation variables excluding the trailing dt, if present.
  [[nodiscard]] int n_delta_vars() const { return map.nvars() - (has_time ? 1 : 0); }
  [[nodiscard]] std::vector<double> nominal_endpoint() const { return map.constant_part(); }
};

/// Validate variables against the model, derive labels and unit scales.
[[nodiscard]] std::vector<std::string> expand_var_labels(const dynamics::DynamicsModel& model,
                                                         std::span<const ExpandVar> vars);

/// Flow map at fixed final time t_end (internal units).
[[nodiscard]] FlowExpansion expand_flow(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                                        std::span<const double> x0, std::span<const ExpandVar> vars, int order,
                                        double t_end, const IntegrateOptions& opts = {});

/// Flow map over perturbations and evaluation epoch t_end + dt.
[[nodiscard]] FlowExpansion expand_flow_with_time(const dynamics::DynamicsModel& model,
                                                  const netpoly::PolicyNet* policy, std::span<const double> x0,
                                                  std::span<const ExpandVar> vars, int order, double t_end,
                                                  const IntegrateOptions& opts = {});

}  // namespace ettk::jetflow
