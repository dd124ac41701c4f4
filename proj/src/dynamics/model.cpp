#include "ettk/dynamics/model.hpp"

namespace ettk::dynamics {

double DynamicsModel::param_nominal(const std::string& name) const {
  if (const auto* m = std::get_if<TransferModel>(&kind_)) {
    const TransferParams& p = m->params();
    if (name == "mu_sun") return p.mu_sun;
    if (name == "thrust_accel") return p.thrust_accel;
  } else if (const auto* m = std::get_if<LanderModel>(&kind_)) {
    const LanderParams& p = m->params();
    if (name == "mu") return p.mu;
    if (name == "thrust_max") return p.thrust_max;
    if (name == "isp") return p.isp;
  } else if (const auto* m = std::get_if<DroneModel>(&kind_)) {
    const DroneParams& p = m->params();
    if (name == "mass") return p.mass;
    if (name == "k_omega") return p.k_omega;
    if (name == "k_x") return p.k_x;
    if (name == "k_y") return p.k_y;
    if (name == "k_z") return p.k_z;
    if (name == "k_h") return p.k_h;
    if (name == "k_p") return p.k_p;
    if (name == "k_q") return p.k_q;
    if (name == "k_pv") return p.k_pv;
    if (name == "k_qv") return p.k_qv;
    if (name == "k_r1") return p.k_r1;
    if (name == "k_r2") return p.k_r2;
    if (name == "k_rr") return p.k_rr;
    if (name == "rotor_tau") return p.rotor_tau;
    if (name == "omega_min") return p.omega_min;
    if (name == "omega_max") return p.omega_max;
  }
  throw std::invalid_argument("model '" + name_ + "' has no parameter '" + name + "'");
}

void DynamicsModel::validate_policy_pairing(const netpoly::PolicyNet* policy) const {
  if (policy == nullptr) return;
  netpoly::validate_policy(*policy);
  if (std::holds_alternative<CustomModel>(kind_))
    throw std::invalid_argument("custom model '" + name_ + "' does not take a policy");
  if (policy->input_dim != state_dim())
    throw std::invalid_argument("model '" + name_ + "': policy input_dim " + std::to_string(policy->input_dim) +
                                " != state dimension " + std::to_string(state_dim()));
  using netpoly::OutputWiring;
  OutputWiring expected = OutputWiring::raw;
  if (std::holds_alternative<TransferModel>(kind_)) expected = OutputWiring::direction;
  if (std::holds_alternative<LanderModel>(kind_)) expected = OutputWiring::throttle_direction;
  if (std::holds_alternative<DroneModel>(kind_)) expected = OutputWiring::rotor_sigmoid;
  if (policy->wiring != expected)
    throw std::invalid_argument("model '" + name_ + "': policy output wiring '" + wiring_name(policy->wiring) +
                                "' does not match expected '" + wiring_name(expected) + "'");
  if (std::holds_alternative<DroneModel>(kind_) && policy->output_dim() != 4)
    throw std::invalid_argument("model 'drone': policy must emit 4 rotor commands");
}

}  // namespace ettk::dynamics
