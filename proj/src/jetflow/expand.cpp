#include "ettk/jetflow/expand.hpp"

#include <algorithm>
#include <stdexcept>

namespace ettk::jetflow {

using polyalg::TPoly;

std::vector<std::string> expand_var_labels(const dynamics::DynamicsModel& model, std::span<const ExpandVar> vars) {
  if (vars.empty()) throw std::invalid_argument("expand: at least one expansion variable is required");
  const auto known_params = model.param_names();
  std::vector<std::string> labels;
  labels.reserve(vars.size());
  for (const ExpandVar& v : vars) {
    if (v.scale == 0.0 || !std::isfinite(v.scale))
      throw std::invalid_argument("expand: variable seed scale must be finite and nonzero");
    if (v.kind == ExpandVar::Kind::state) {
      if (v.index < 0 || v.index >= model.state_dim())
        throw std::invalid_argument("expand: state index " + std::to_string(v.index) + " out of range");
      labels.push_back("d" + model.state_names()[static_cast<std::size_t>(v.index)]);
    } else {
      if (std::find(known_params.begin(), known_params.end(), v.param) == known_params.end())
        throw std::invalid_argument("expand: model '" + model.name() + "' has no parameter '" + v.param + "'");
      labels.push_back("d" + v.param);
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j]) throw std::invalid_argument("expand: duplicate expansion variable " + labels[i]);
  return labels;
}

namespace {

struct SeedSetup {
  std::vector<TPoly> y0;                       // jet initial state
  dynamics::ParamJets<TPoly> param_jets;       // physical-valued parameter jets
  std::vector<double> var_unit_physical;
};

SeedSetup build_seeds(const dynamics::DynamicsModel& model, std::span<const double> x0,
                      std::span<const ExpandVar> vars, int nvars_total, int order) {
  SeedSetup s;
  const int dim = model.state_dim();
  s.y0.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) s.y0.push_back(TPoly::constant(nvars_total, order, x0[static_cast<std::size_t>(i)]));
  s.var_unit_physical.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const ExpandVar& v = vars[j];
    if (v.kind == ExpandVar::Kind::state) {
      s.y0[static_cast<std::size_t>(v.index)] +=
          TPoly::variable(nvars_total, order, static_cast<int>(j), v.scale);
      s.var_unit_physical.push_back(v.scale * model.state_scale()[static_cast<std::size_t>(v.index)]);
    } else {
      // Parameter overrides replace the nominal wholesale, so the jet must
      // carry nominal + scale * var; the nominal constant is added in
      // add_param_nominals once the model kind is known.
      TPoly jet = TPoly::variable(nvars_total, order, static_cast<int>(j), v.scale);
      s.param_jets.emplace(v.param, std::move(jet));
      s.var_unit_physical.push_back(v.scale);
    }
  }
  return s;
}

/// Fill the constant parts of parameter jets with the model's nominal SI
/// values (overrides replace the nominal wholesale).
void add_param_nominals(const dynamics::DynamicsModel& model, dynamics::ParamJets<TPoly>& jets) {
  for (auto& [name, jet] : jets) jet += model.param_nominal(name);
}

FlowExpansion expand_impl(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                          std::span<const double> x0, std::span<const ExpandVar> vars, int order, double t_end,
                          const IntegrateOptions& opts, bool with_time) {
  if (order < 1) throw std::invalid_argument("expand: order must be >= 1");
  if (static_cast<int>(x0.size()) != model.state_dim())
    throw std::invalid_argument("expand: initial state length mismatches model dimension");
  std::vector<std::string> labels = expand_var_labels(model, vars);
  const int m = static_cast<int>(vars.size());
  const int nvars_total = m + (with_time ? 1 : 0);

  // Integrate the jet over the m delta variables only; the dt variable is
  // appended afterwards, so the transport itself never carries it.
  SeedSetup seeds = build_seeds(model, x0, vars, m, order);
  add_param_nominals(model, seeds.param_jets);
  const TPoly like = TPoly::constant(m, order, 0.0);
  auto rhs = model.prepared_rhs<TPoly>(policy, seeds.param_jets.empty() ? nullptr : &seeds.param_jets, like);

  std::vector<TPoly> y = seeds.y0;
  IntegrateOptions o = opts;
  o.dense = false;
  IntegrateStats stats = integrate_adaptive<TPoly>(
      rhs, y, 0.0, t_end, o,
      [](double, double, const std::vector<TPoly>&, const DenseData<TPoly>*) { return true; });

  FlowExpansion fx;
  fx.has_time = with_time;
  fx.t_nom = t_end;
  fx.order = order;
  fx.model_name = model.name();
  fx.vars.assign(vars.begin(), vars.end());
  fx.var_unit_physical = seeds.var_unit_physical;
  fx.comp_unit_physical = model.state_scale();
  fx.comp_labels = model.state_names();
  fx.stats = stats;

  if (with_time) {
    labels.emplace_back("dt");
    fx.var_unit_physical.push_back(model.time_scale());
    const int dt_var = m;
    for (TPoly& c : y) c = polyalg::promote(c, nvars_total, order);
    // Rebuild parameter jets in the widened algebra.
    SeedSetup wide = build_seeds(model, x0, vars, nvars_total, order);
    add_param_nominals(model, wide.param_jets);
    const TPoly wlike = TPoly::constant(nvars_total, order, 0.0);
    auto wrhs = model.prepared_rhs<TPoly>(policy, wide.param_jets.empty() ? nullptr : &wide.param_jets, wlike);

    const std::vector<TPoly> base = y;
    std::vector<TPoly> f(y.size(), wlike);
    for (int sweep = 0; sweep < order; ++sweep) {
      wrhs(std::span<const TPoly>(y.data(), y.size()), std::span<TPoly>(f.data(), f.size()));
      bool changed = false;
      for (std::size_t i = 0; i < y.size(); ++i) {
        TPoly next = base[i] + polyalg::antiderivative(f[i], dt_var);
        if (!changed) {
          const auto a = next.coeffs();
          const auto b = y[i].coeffs();
          for (std::size_t r = 0; r < a.size(); ++r)
            if (a[r] != b[r]) {
              changed = true;
              break;
            }
        }
        y[i] = std::move(next);
      }
      if (!changed) break;
    }
  }

  fx.map = polyalg::TaylorMap(std::move(y), std::move(labels));
  return fx;
}

}  // namespace

FlowExpansion expand_flow(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                          std::span<const double> x0, std::span<const ExpandVar> vars, int order, double t_end,
                          const IntegrateOptions& opts) {
  return expand_impl(model, policy, x0, vars, order, t_end, opts, false);
}

FlowExpansion expand_flow_with_time(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                                    std::span<const double> x0, std::span<const ExpandVar> vars, int order,
                                    double t_end, const IntegrateOptions& opts) {
  return expand_impl(model, policy, x0, vars, order, t_end, opts, true);
}

}  // namespace ettk::jetflow
