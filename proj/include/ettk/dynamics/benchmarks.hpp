#pragma once
/**
 * @file benchmarks.hpp
 * @brief The three benchmark closed-loop systems, generic over the algebra.
 *
 * Every right-hand side is one template over T in {double, TPoly}; the
 * degree-0 coefficients of a jet evaluation therefore reproduce the scalar
 * evaluation bit for bit. Models integrate in nondimensional internal units
 * (documented per model); policies, however, see the physical SI state, so a
 * weight file is meaningful independent of the internal unit system.
 *
 * Parameters may be overridden per evaluation with algebra-valued jets
 * (ParamJets), which is how expansions with respect to physical parameters
 * are seeded. Overrides are given in SI and converted here.
 */

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ettk/dynamics/params.hpp"
#include "ettk/errors.hpp"
#include "ettk/netpoly/policy_net.hpp"
#include "ettk/polyalg/analytic.hpp"
#include "ettk/polyalg/scalar_fns.hpp"

namespace ettk::dynamics {

template <class T>
using ParamJets = std::map<std::string, T>;

namespace detail {

template <class T>
[[nodiscard]] T pick(const ParamJets<T>* ov, const std::string& name, double nominal, const T& like) {
  using ettk::alg::constant_like;
  using ettk::polyalg::constant_like;
  if (ov) {
    auto it = ov->find(name);
    if (it != ov->end()) return it->second;
  }
  return constant_like(like, nominal);
}

template <class T>
[[nodiscard]] double const_part(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return v.coeff0();
  }
}

/// Policy features are the physical state: internal * (physical per internal).
template <class T>
[[nodiscard]] std::vector<T> physical_features(std::span<const T> x, std::span<const double> scale) {
  std::vector<T> f;
  f.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f.push_back(x[i] * scale[i]);
  return f;
}

}  // namespace detail

/**
 * Rotating-frame low-thrust transfer (6 states: position, velocity).
 * Internal units: length = orbit_radius, time = 1/sqrt(mu/orbit_radius^3),
 * so the scaled gravitational parameter and frame rate are both 1. The frame
 * rate stays pinned to the nominal parameters even when mu_sun is overridden
 * (the rotating frame is a kinematic choice, not a dynamic one).
 */
class TransferModel {
 public:
  explicit TransferModel(const TransferParams& p) : p_(p) {
    if (!(p.mu_sun > 0.0) || !(p.orbit_radius > 0.0) || !(p.thrust_accel >= 0.0) || !(p.soi_radius > 0.0))
      throw std::invalid_argument("TransferModel: parameters must be positive (thrust_accel >= 0)");
    lscale_ = p.orbit_radius;
    tscale_ = 1.0 / std::sqrt(p.mu_sun / (p.orbit_radius * p.orbit_radius * p.orbit_radius));
    omega_s_ = 1.0;
  }

  [[nodiscard]] const TransferParams& params() const { return p_; }
  [[nodiscard]] double length_scale() const { return lscale_; }
  [[nodiscard]] double time_scale() const { return tscale_; }
  [[nodiscard]] double soi_radius_internal() const { return p_.soi_radius / lscale_; }

  [[nodiscard]] static std::vector<std::string> state_names() {
    return {"x", "y", "z", "vx", "vy", "vz"};
  }
  [[nodiscard]] std::vector<double> state_scale() const {
    const double v = lscale_ / tscale_;
    return {lscale_, lscale_, lscale_, v, v, v};
  }
  [[nodiscard]] static std::vector<std::string> param_names() { return {"mu_sun", "thrust_accel"}; }

  template <class T>
  struct Prep {
    T mu_s;     // mu * t^2 / l^3
    T gamma_s;  // thrust accel * t^2 / l
  };

  template <class T>
  [[nodiscard]] Prep<T> prepare(const ParamJets<T>* ov, const T& like) const {
    const double t2 = tscale_ * tscale_;
    Prep<T> pp{detail::pick(ov, "mu_sun", p_.mu_sun, like) * (t2 / (lscale_ * lscale_ * lscale_)),
               detail::pick(ov, "thrust_accel", p_.thrust_accel, like) * (t2 / lscale_)};
    return pp;
  }

  template <class T>
  void rhs(const Prep<T>& pp, const netpoly::PolicyNet* policy, std::span<const T> x, std::span<T> dx) const {
    using std::pow;
    using ettk::polyalg::pow;
    const double om = omega_s_;
    T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    T ir3 = pow(r2, -1.5);
    dx[0] = x[3];
    dx[1] = x[4];
    dx[2] = x[5];
    dx[3] = x[4] * (2.0 * om) + x[0] * (om * om) - pp.mu_s * x[0] * ir3;
    dx[4] = x[3] * (-2.0 * om) + x[1] * (om * om) - pp.mu_s * x[1] * ir3;
    dx[5] = -(pp.mu_s * x[2] * ir3);
    if (policy != nullptr) {
      const auto scale = state_scale();
      const std::vector<T> feats = detail::physical_features(x, scale);
      const std::vector<T> out = netpoly::eval_net<T>(*policy, feats);
      const auto dir = netpoly::normalize_direction<T>(out);
      dx[3] += pp.gamma_s * dir[0];
      dx[4] += pp.gamma_s * dir[1];
      dx[5] += pp.gamma_s * dir[2];
    }
  }

 private:
  TransferParams p_;
  double lscale_, tscale_, omega_s_;
};

/**
 * Powered descent around a rotating small body (7 states: position,
 * velocity, mass). Internal units: length = length_ref, time =
 * sqrt(length_ref^3 / mu), mass = mass_ref; the scaled gravitational
 * parameter is 1. Thrust is u * thrust_max along the commanded direction and
 * mass depletes at u * thrust_max / (isp g0).
 */
class LanderModel {
 public:
  explicit LanderModel(const LanderParams& p) : p_(p) {
    if (!(p.mu > 0.0) || !(p.thrust_max >= 0.0) || !(p.isp > 0.0) || !(p.g0 > 0.0) || !(p.mass_ref > 0.0) ||
        !(p.length_ref > 0.0) || !std::isfinite(p.spin_rate))
      throw std::invalid_argument("LanderModel: invalid parameters");
    lscale_ = p.length_ref;
    tscale_ = std::sqrt(lscale_ * lscale_ * lscale_ / p.mu);
    mscale_ = p.mass_ref;
    omega_s_ = p.spin_rate * tscale_;
  }

  [[nodiscard]] const LanderParams& params() const { return p_; }
  [[nodiscard]] double length_scale() const { return lscale_; }
  [[nodiscard]] double time_scale() const { return tscale_; }
  [[nodiscard]] double mass_scale() const { return mscale_; }

  [[nodiscard]] static std::vector<std::string> state_names() {
    return {"x", "y", "z", "vx", "vy", "vz", "m"};
  }
  [[nodiscard]] std::vector<double> state_scale() const {
    const double v = lscale_ / tscale_;
    return {lscale_, lscale_, lscale_, v, v, v, mscale_};
  }
  [[nodiscard]] static std::vector<std::string> param_names() { return {"mu", "thrust_max", "isp"}; }

  template <class T>
  struct Prep {
    T mu_s;       // 1 unless overridden
    T thrust_s;   // thrust_max * t^2 / (l * m_ref): scaled accel at unit mass
    T mdot_s;     // thrust_max * t / (isp * g0 * m_ref): scaled mass rate at u=1
  };

  template <class T>
  [[nodiscard]] Prep<T> prepare(const ParamJets<T>* ov, const T& like) const {
    using ettk::alg::recip;
    using ettk::polyalg::recip;
    const double t2 = tscale_ * tscale_;
    T thrust = detail::pick(ov, "thrust_max", p_.thrust_max, like);
    T isp = detail::pick(ov, "isp", p_.isp, like);
    Prep<T> pp{detail::pick(ov, "mu", p_.mu, like) * (t2 / (lscale_ * lscale_ * lscale_)),
               thrust * (t2 / (lscale_ * mscale_)),
               thrust * recip(isp) * (tscale_ / (p_.g0 * mscale_))};
    return pp;
  }

  template <class T>
  void rhs(const Prep<T>& pp, const netpoly::PolicyNet* policy, std::span<const T> x, std::span<T> dx) const {
    using std::pow;
    using ettk::polyalg::pow;
    using ettk::alg::recip;
    using ettk::polyalg::recip;
    using ettk::alg::sigmoid;
    using ettk::polyalg::sigmoid;
    using ettk::alg::constant_like;
    using ettk::polyalg::constant_like;
    const double om = omega_s_;
    T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    T ir3 = pow(r2, -1.5);
    dx[0] = x[3];
    dx[1] = x[4];
    dx[2] = x[5];
    dx[3] = x[4] * (2.0 * om) + x[0] * (om * om) - pp.mu_s * x[0] * ir3;
    dx[4] = x[3] * (-2.0 * om) + x[1] * (om * om) - pp.mu_s * x[1] * ir3;
    dx[5] = -(pp.mu_s * x[2] * ir3);
    if (policy != nullptr) {
      if (detail::const_part(x[6]) <= 0.0)
        throw numerical_error("LanderModel: nonpositive mass reached");
      const auto scale = state_scale();
      const std::vector<T> feats = detail::physical_features(x, scale);
      const std::vector<T> out = netpoly::eval_net<T>(*policy, feats);
      T u = sigmoid(out[0]);
      const T dirv[3] = {out[1], out[2], out[3]};
      const auto dir = netpoly::normalize_direction<T>(std::span<const T>(dirv, 3));
      T acc = u * pp.thrust_s * recip(x[6]);
      dx[3] += acc * dir[0];
      dx[4] += acc * dir[1];
      dx[5] += acc * dir[2];
      dx[6] = -(u * pp.mdot_s);
    } else {
      dx[6] = constant_like(x[0], 0.0);
    }
  }

 private:
  LanderParams p_;
  double lscale_, tscale_, mscale_, omega_s_;
};

/**
 * Quadcopter (16 states: world position and velocity, ZYX Euler attitude,
 * body rates, four rotor speeds), integrated in SI units. Body +z points
 * down; gravity is +gravity on world z and rotor thrust acts along body -z.
 * Rotor speeds track the commanded omega_min + u (omega_max - omega_min)
 * through a first-order lag; the yaw moment's rotor-acceleration term is
 * substituted in closed form from that motor equation.
 */
class DroneModel {
 public:
  explicit DroneModel(const DroneParams& p) : p_(p) {
    const double checks[] = {p.mass,  p.inertia_x, p.inertia_y, p.inertia_z, p.gravity,  p.k_omega, p.k_x,
                             p.k_y,   p.k_z,       p.k_h,       p.k_p,       p.k_q,      p.k_pv,    p.k_qv,
                             p.k_r1,  p.k_r2,      p.k_rr,      p.rotor_tau, p.omega_min, p.omega_max};
    for (double v : checks)
      if (!std::isfinite(v))
        throw std::invalid_argument("DroneModel: all aero/inertia/rotor parameters must be supplied (found NaN)");
    if (!(p.mass > 0.0) || !(p.inertia_x > 0.0) || !(p.inertia_y > 0.0) || !(p.inertia_z > 0.0) ||
        !(p.rotor_tau > 0.0) || !(p.omega_max > p.omega_min))
      throw std::invalid_argument("DroneModel: mass/inertia/rotor_tau must be > 0 and omega_max > omega_min");
  }

  [[nodiscard]] const DroneParams& params() const { return p_; }
  [[nodiscard]] static double time_scale() { return 1.0; }

  [[nodiscard]] static std::vector<std::string> state_names() {
    return {"x", "y", "z", "vx", "vy", "vz", "phi", "theta", "psi", "p", "q", "r", "w1", "w2", "w3", "w4"};
  }
  [[nodiscard]] static std::vector<double> state_scale() { return std::vector<double>(16, 1.0); }
  [[nodiscard]] static std::vector<std::string> param_names() {
    return {"mass", "k_omega", "k_x", "k_y", "k_z", "k_h", "k_p", "k_q", "k_pv", "k_qv", "k_r1", "k_r2", "k_rr",
            "rotor_tau", "omega_min", "omega_max"};
  }

  template <class T>
  struct Prep {
    T inv_m, k_omega, k_x, k_y, k_z, k_h;
    T k_p, k_q, k_pv, k_qv, k_r1, k_r2, k_rr;
    T inv_tau, wmin, wrange;
  };

  template <class T>
  [[nodiscard]] Prep<T> prepare(const ParamJets<T>* ov, const T& like) const {
    using ettk::alg::recip;
    using ettk::polyalg::recip;
    Prep<T> pp{recip(detail::pick(ov, "mass", p_.mass, like)),
               detail::pick(ov, "k_omega", p_.k_omega, like),
               detail::pick(ov, "k_x", p_.k_x, like),
               detail::pick(ov, "k_y", p_.k_y, like),
               detail::pick(ov, "k_z", p_.k_z, like),
               detail::pick(ov, "k_h", p_.k_h, like),
               detail::pick(ov, "k_p", p_.k_p, like),
               detail::pick(ov, "k_q", p_.k_q, like),
               detail::pick(ov, "k_pv", p_.k_pv, like),
               detail::pick(ov, "k_qv", p_.k_qv, like),
               detail::pick(ov, "k_r1", p_.k_r1, like),
               detail::pick(ov, "k_r2", p_.k_r2, like),
               detail::pick(ov, "k_rr", p_.k_rr, like),
               recip(detail::pick(ov, "rotor_tau", p_.rotor_tau, like)),
               detail::pick(ov, "omega_min", p_.omega_min, like),
               detail::pick(ov, "omega_max", p_.omega_max, like) - detail::pick(ov, "omega_min", p_.omega_min, like)};
    return pp;
  }

  template <class T>
  void rhs(const Prep<T>& pp, const netpoly::PolicyNet* policy, std::span<const T> x, std::span<T> dx) const {
    using std::sin;
    using std::cos;
    using ettk::polyalg::sin;
    using ettk::polyalg::cos;
    using ettk::alg::recip;
    using ettk::polyalg::recip;
    using ettk::alg::sigmoid;
    using ettk::polyalg::sigmoid;
    const T& vx = x[3];
    const T& vy = x[4];
    const T& vz = x[5];
    T sph = sin(x[6]), cph = cos(x[6]);
    T sth = sin(x[7]), cth = cos(x[7]);
    T sps = sin(x[8]), cps = cos(x[8]);
    if (std::abs(detail::const_part(cth)) < 1e-6)
      throw numerical_error("DroneModel: pitch at +-90 deg, Euler kinematics singular");
    T inv_cth = recip(cth);
    T tth = sth * inv_cth;

    // Body-to-world rotation (ZYX), columns used for R^T v and R F.
    T r00 = cps * cth, r01 = cps * sth * sph - sps * cph, r02 = cps * sth * cph + sps * sph;
    T r10 = sps * cth, r11 = sps * sth * sph + cps * cph, r12 = sps * sth * cph - cps * sph;
    T r20 = -sth, r21 = cth * sph, r22 = cth * cph;

    // Body-frame velocity.
    T vbx = r00 * vx + r10 * vy + r20 * vz;
    T vby = r01 * vx + r11 * vy + r21 * vz;
    T vbz = r02 * vx + r12 * vy + r22 * vz;

    const T& w1 = x[12];
    const T& w2 = x[13];
    const T& w3 = x[14];
    const T& w4 = x[15];
    T wsum = w1 + w2 + w3 + w4;
    T w1s = w1 * w1, w2s = w2 * w2, w3s = w3 * w3, w4s = w4 * w4;
    T wss = w1s + w2s + w3s + w4s;

    // Aerodynamic force in the body frame.
    T fx = -(pp.k_x * vbx * wsum);
    T fy = -(pp.k_y * vby * wsum);
    T fz = -(pp.k_omega * wss) - pp.k_z * vbz * wsum - pp.k_h * (vbx * vbx + vby * vby);

    dx[0] = vx;
    dx[1] = vy;
    dx[2] = vz;
    dx[3] = (r00 * fx + r01 * fy + r02 * fz) * pp.inv_m;
    dx[4] = (r10 * fx + r11 * fy + r12 * fz) * pp.inv_m;
    dx[5] = (r20 * fx + r21 * fy + r22 * fz) * pp.inv_m + p_.gravity;

    // Euler-angle kinematics.
    const T& pb = x[9];
    const T& qb = x[10];
    const T& rb = x[11];
    T qsrc = qb * sph + rb * cph;
    dx[6] = pb + qsrc * tth;
    dx[7] = qb * cph - rb * sph;
    dx[8] = qsrc * inv_cth;

    // Rotor commands (track current speed when no policy drives them).
    T cmd1 = w1, cmd2 = w2, cmd3 = w3, cmd4 = w4;
    if (policy != nullptr) {
      const std::vector<T> out = netpoly::eval_net<T>(*policy, x);
      cmd1 = pp.wmin + sigmoid(out[0]) * pp.wrange;
      cmd2 = pp.wmin + sigmoid(out[1]) * pp.wrange;
      cmd3 = pp.wmin + sigmoid(out[2]) * pp.wrange;
      cmd4 = pp.wmin + sigmoid(out[3]) * pp.wrange;
    }
    dx[12] = (cmd1 - w1) * pp.inv_tau;
    dx[13] = (cmd2 - w2) * pp.inv_tau;
    dx[14] = (cmd3 - w3) * pp.inv_tau;
    dx[15] = (cmd4 - w4) * pp.inv_tau;

    // Moments; the yaw rotor-acceleration term uses the motor equation above.
    T mx = pp.k_p * (w1s - w2s - w3s + w4s) + pp.k_pv * vby;
    T my = pp.k_q * (w1s + w2s - w3s - w4s) + pp.k_qv * vbx;
    T s1 = -w1 + w2 - w3 + w4;
    T s1c = -cmd1 + cmd2 - cmd3 + cmd4;
    T mz = pp.k_r1 * s1 + pp.k_r2 * ((s1c - s1) * pp.inv_tau) - pp.k_rr * rb;

    const double ix = p_.inertia_x, iy = p_.inertia_y, iz = p_.inertia_z;
    dx[9] = (mx - (iz - iy) * (qb * rb)) * (1.0 / ix);
    dx[10] = (my - (ix - iz) * (pb * rb)) * (1.0 / iy);
    dx[11] = (mz - (iy - ix) * (pb * qb)) * (1.0 / iz);
  }

 private:
  DroneParams p_;
};

}  // namespace ettk::dynamics
