#pragma once
/**
 * @file params.hpp
 * @brief Physical (SI) parameter sets for the benchmark models.
 *
 * Values are stored in SI; each model nondimensionalizes internally (see
 * model.hpp for the unit system). Fields left NaN must be supplied by
 * configuration; model construction validates finiteness.
 */

#include <cmath>
#include <string>
#include <vector>

namespace ettk::dynamics {

/// Low-thrust interplanetary stage in a frame rotating with the target body
/// (circular orbit of radius orbit_radius, rate sqrt(mu_sun/orbit_radius^3)).
struct TransferParams {
  double mu_sun = 1.32712440018e20;     // m^3/s^2 (standard solar GM; config may override)
  double orbit_radius = 1.3 * 1.495978707e11;  // m (1.3 au)
  double thrust_accel = 1.0e-4;         // m/s^2 (0.1 mm/s^2)
  double soi_radius = 9.24e8;           // m (sphere-of-influence event radius)
};

/// Powered descent around a uniformly rotating small body; thrust is
/// throttled between 0 and thrust_max and mass depletes with exhaust
/// velocity isp * g0.
struct LanderParams {
  double mu = 1.530348199e9;    // m^3/s^2
  double spin_rate = 4.1596e-4; // rad/s about +z
  double thrust_max = 80.0;     // N
  double isp = 600.0;           // s
  double g0 = 9.8;              // m/s^2
  double mass_ref = 353.0;      // kg, reference (initial) mass = mass unit
  double length_ref = 1.0e5;    // m, length unit for nondimensionalization
};

/// Quadcopter with first-order rotor lag and polynomial aero/moment models.
/// No published coefficient set exists for this fixture, so every value is a
/// mandatory config input (NaN until supplied).
struct DroneParams {
  double mass = NAN;        // kg
  double inertia_x = NAN;   // kg m^2 (diagonal inertia)
  double inertia_y = NAN;
  double inertia_z = NAN;
  double gravity = 9.81;    // m/s^2, +z down
  double k_omega = NAN;     // thrust per (rad/s)^2
  double k_x = NAN;         // body-x drag per (m/s)(rad/s)
  double k_y = NAN;
  double k_z = NAN;
  double k_h = NAN;         // per (m/s)^2, horizontal-speed thrust loss
  double k_p = NAN;         // roll moment per (rad/s)^2
  double k_q = NAN;
  double k_pv = NAN;        // roll moment per m/s
  double k_qv = NAN;
  double k_r1 = NAN;        // yaw moment per rad/s
  double k_r2 = NAN;        // yaw moment per rad/s^2
  double k_rr = NAN;        // yaw damping per rad/s
  double rotor_tau = NAN;   // s, first-order rotor lag
  double omega_min = NAN;   // rad/s commanded floor (u = 0)
  double omega_max = NAN;   // rad/s commanded ceiling (u = 1)
};

}  // namespace ettk::dynamics
