#pragma once
// Shared fixtures for the test suites: a fully-specified quadcopter parameter
// set (the model has no built-in defaults) and small random policies whose
// outputs stay tame enough for long closed-loop integrations.

#include <cstdint>
#include <vector>

#include "ettk/dynamics/params.hpp"
#include "ettk/netpoly/policy_net.hpp"
#include "ettk/polyalg/tpoly.hpp"
#include "ettk/rng.hpp"

namespace ettk::testfix {

/// Small-quadcopter coefficients; hover rotor speed sqrt(m g / (4 k_omega))
/// is about 600 rad/s, inside the commanded band [150, 1000].
inline dynamics::DroneParams drone_params() {
  dynamics::DroneParams p;
  p.mass = 0.5;
  p.inertia_x = 0.0023;
  p.inertia_y = 0.0023;
  p.inertia_z = 0.0040;
  p.gravity = 9.81;
  p.k_omega = 3.4e-6;
  p.k_x = 1.0e-5;
  p.k_y = 1.0e-5;
  p.k_z = 2.0e-5;
  p.k_h = 3.0e-3;
  p.k_p = 4.0e-6;
  p.k_q = 4.0e-6;
  p.k_pv = 1.0e-4;
  p.k_qv = 1.0e-4;
  p.k_r1 = 1.0e-4;
  p.k_r2 = 1.0e-6;
  p.k_rr = 5.0e-4;
  p.rotor_tau = 0.03;
  p.omega_min = 150.0;
  p.omega_max = 1000.0;
  return p;
}

/// Dense random policy with weights U(-amp, amp) and zero shifts/unit scales.
/// Small amplitudes keep tanh/sigmoid heads near their linear range so the
/// closed loop stays integrable over the test horizons.
inline netpoly::PolicyNet random_policy(const std::vector<int>& widths, netpoly::Activation hidden,
                                        netpoly::OutputWiring wiring, double amp, std::uint64_t seed,
                                        const std::vector<double>& input_scale = {}) {
  CounterRng rng(seed, 0x90);
  netpoly::PolicyNet net;
  net.input_dim = widths.front();
  net.input_shift.assign(static_cast<std::size_t>(net.input_dim), 0.0);
  if (input_scale.empty()) {
    net.input_scale.assign(static_cast<std::size_t>(net.input_dim), 1.0);
  } else {
    net.input_scale = input_scale;
  }
  net.wiring = wiring;
  for (std::size_t i = 1; i < widths.size(); ++i) {
    netpoly::Layer l;
    l.rows = widths[i];
    l.cols = widths[i - 1];
    l.activation = (i + 1 == widths.size()) ? netpoly::Activation::linear : hidden;
    l.weights.resize(static_cast<std::size_t>(l.rows) * l.cols);
    l.bias.resize(static_cast<std::size_t>(l.rows));
    for (double& w : l.weights) w = rng.uniform(-amp, amp);
    for (double& b : l.bias) b = rng.uniform(-amp, amp);
    net.layers.push_back(std::move(l));
  }
  return net;
}

/// Thrust-direction policy for the transfer model (6 -> 3, direction head).
/// A bias on the last layer keeps the direction away from the zero-norm pole.
inline netpoly::PolicyNet transfer_policy(std::uint64_t seed, double amp = 0.05) {
  auto net = random_policy({6, 8, 8, 3}, netpoly::Activation::tanh, netpoly::OutputWiring::direction, amp, seed,
                           std::vector<double>(6, 1e-11));
  net.layers.back().bias = {0.6, -0.5, 0.3};
  return net;
}

/// Throttle+direction policy for the lander (7 -> 4).
inline netpoly::PolicyNet lander_policy(std::uint64_t seed, double amp = 0.05) {
  std::vector<double> scale(7, 1e-5);
  scale[6] = 1e-2;  // mass feature is O(100) kg
  auto net = random_policy({7, 8, 8, 4}, netpoly::Activation::tanh, netpoly::OutputWiring::throttle_direction, amp,
                           seed, scale);
  net.layers.back().bias = {0.0, 0.4, 0.4, -0.7};
  return net;
}

/// Rotor-command policy for the drone (16 -> 4). The output bias centers the
/// sigmoid near the hover command so trajectories do not immediately diverge.
inline netpoly::PolicyNet drone_policy(std::uint64_t seed, double amp = 0.02) {
  std::vector<double> scale(16, 1.0);
  for (int i = 12; i < 16; ++i) scale[static_cast<std::size_t>(i)] = 1e-3;  // rotor speeds are O(600)
  auto net = random_policy({16, 8, 8, 4}, netpoly::Activation::tanh, netpoly::OutputWiring::rotor_sigmoid, amp, seed,
                           scale);
  // sigmoid^-1((600.6 - 150) / 850) = sigmoid^-1(0.53) ~= 0.12
  for (double& b : net.layers.back().bias) b += 0.12;
  return net;
}

/// First-order jets x_i + d_i in the (dim, order) algebra.
inline std::vector<polyalg::TPoly> state_jets(std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<polyalg::TPoly> jets;
  jets.reserve(x.size());
  for (int i = 0; i < n; ++i)
    jets.push_back(polyalg::TPoly::constant(n, order, x[static_cast<std::size_t>(i)]) +
                   polyalg::TPoly::variable(n, order, i));
  return jets;
}

}  // namespace ettk::testfix
