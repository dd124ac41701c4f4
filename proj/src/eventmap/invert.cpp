#include "ettk/eventmap/invert.hpp"

#include <cmath>

namespace ettk::eventmap {

using polyalg::TPoly;

TriggerInversion invert_trigger_time(const jetflow::FlowExpansion& flow, const EventSpec& spec) {
  if (!flow.has_time) throw std::invalid_argument("invert_trigger_time: flow expansion lacks the dt variable");
  const int dt_var = flow.nvars() - 1;
  const int order = flow.order;

  TPoly e = event_value<TPoly>(spec, std::span<const TPoly>(flow.map.components().data(),
                                                            flow.map.components().size()));
  double e_scale = 0.0;
  for (double c : e.coeffs()) e_scale = std::max(e_scale, std::abs(c));
  if (e_scale == 0.0) throw numerical_error("invert_trigger_time: event composition is identically zero");

  // The dt-linear coefficient is de/dt along the nominal trajectory; without
  // transversality there is no locally unique trigger time.
  std::vector<int> alpha(static_cast<std::size_t>(flow.nvars()), 0);
  alpha[static_cast<std::size_t>(dt_var)] = 1;
  const double edot = e.coeff(alpha);
  if (std::abs(edot) < spec.transversality_tol * std::max(1.0, e_scale))
    throw grazing_error("invert_trigger_time: |de/dt| = " + std::to_string(std::abs(edot)) +
                        " too small for inversion (tangential contact)");

  // The constant part is the refinement residual of the nominal crossing;
  // it must be negligible (the expansion epoch must sit on the manifold),
  // and is zeroed so that T(0) = 0 holds exactly.
  if (std::abs(e.coeff0()) > 1e-8 * e_scale)
    throw numerical_error("invert_trigger_time: expansion epoch is off the manifold (|e| = " +
                          std::to_string(std::abs(e.coeff0())) + ")");
  e.set_coeff0(0.0);

  const TPoly e_dt = polyalg::derivative(e, dt_var);
  TPoly t_poly = polyalg::constant_like(e, 0.0);
  const int iters = static_cast<int>(std::ceil(std::log2(static_cast<double>(order) + 1.0))) + 1;
  for (int it = 0; it < iters; ++it) {
    TPoly num = polyalg::substitute(e, dt_var, t_poly);
    TPoly den = polyalg::substitute(e_dt, dt_var, t_poly);
    t_poly -= num * polyalg::recip(den);
  }

  TriggerInversion out;
  out.e_slope = edot;
  double resid = 0.0;
  // Materialize before iterating: coeffs() is a view into this polynomial,
  // and a range-for would not keep a temporary owner alive (C++20).
  const TPoly check = polyalg::substitute(e, dt_var, t_poly);
  for (double c : check.coeffs()) resid = std::max(resid, std::abs(c));
  out.residual = resid / e_scale;
  if (out.residual > 1e-10)
    throw numerical_error("invert_trigger_time: Newton residual " + std::to_string(out.residual) +
                          " exceeds 1e-10 (non-convergent inversion)");
  out.trigger_time = std::move(t_poly);
  return out;
}

EventTransitionMap event_transition_map(const jetflow::FlowExpansion& flow, const EventSpec& spec) {
  TriggerInversion inv = invert_trigger_time(flow, spec);
  const int dt_var = flow.nvars() - 1;

  std::vector<TPoly> comps;
  comps.reserve(flow.map.components().size());
  for (const TPoly& c : flow.map.components())
    comps.push_back(polyalg::drop_variable(polyalg::substitute(c, dt_var, inv.trigger_time), dt_var));

  std::vector<std::string> labels(flow.map.var_labels().begin(), flow.map.var_labels().end() - 1);

  EventTransitionMap ett;
  ett.state_map = polyalg::TaylorMap(std::move(comps), std::move(labels));
  ett.trigger_time = polyalg::drop_variable(inv.trigger_time, dt_var);
  ett.t_star = flow.t_nom;
  ett.e_slope = inv.e_slope;
  ett.newton_residual = inv.residual;
  ett.order = flow.order;
  ett.model_name = flow.model_name;
  ett.vars = flow.vars;
  ett.var_unit_physical.assign(flow.var_unit_physical.begin(), flow.var_unit_physical.end() - 1);
  ett.comp_unit_physical = flow.comp_unit_physical;
  ett.comp_labels = flow.comp_labels;
  return ett;
}

EventPipelineResult expand_to_event(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                                    std::span<const double> x0, std::span<const jetflow::ExpandVar> vars, int order,
                                    const EventSpec& spec, double horizon, const jetflow::IntegrateOptions& opts) {
  EventPipelineResult out{integrate_to_event_or_throw(model, policy, x0, spec, horizon, opts), {}, {}};
  const double t_star = out.nominal.detection.hit->t_star;
  out.flow = jetflow::expand_flow_with_time(model, policy, x0, vars, order, t_star, opts);
  out.ett = event_transition_map(out.flow, spec);
  return out;
}

}  // namespace ettk::eventmap
