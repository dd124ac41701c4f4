#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "ettk/dynamics/model.hpp"
#include "ettk/errors.hpp"
#include "ettk/rng.hpp"
#include "test_fixtures.hpp"

using namespace ettk;
using dynamics::DynamicsModel;
using polyalg::TPoly;

namespace {

/// Straight-line reimplementation of the uncontrolled rotating-frame point
/// mass (scaled mu = omega = 1), kept deliberately independent of the model
/// template.
std::array<double, 6> transfer_rhs_reference(const std::array<double, 6>& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const double ir3 = 1.0 / (r2 * std::sqrt(r2));
  return {x[3],
          x[4],
          x[5],
          2.0 * x[4] + x[0] - x[0] * ir3,
          -2.0 * x[3] + x[1] - x[1] * ir3,
          -x[2] * ir3};
}

std::vector<double> eval_scalar_rhs(const DynamicsModel& model, const netpoly::PolicyNet* policy,
                                    std::span<const double> x) {
  auto rhs = model.prepared_rhs<double>(policy, nullptr, 0.0);
  std::vector<double> dx(x.size(), 0.0);
  rhs(x, dx);
  return dx;
}

}  // namespace

TEST_CASE("uncontrolled transfer matches the plain rotating-frame equations") {
  DynamicsModel model = DynamicsModel::transfer(dynamics::TransferParams{});
  CounterRng rng(31, 0);
  for (int rep = 0; rep < 20; ++rep) {
    std::array<double, 6> x;
    for (int i = 0; i < 3; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(0.5, 1.5);
    for (int i = 3; i < 6; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-0.5, 0.5);
    const auto got = eval_scalar_rhs(model, nullptr, x);
    const auto want = transfer_rhs_reference(x);
    for (int i = 0; i < 6; ++i)
      CHECK(got[static_cast<std::size_t>(i)] ==
            doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-13));
  }
}

TEST_CASE("coasting rotating-frame flow conserves the frame energy integral") {
  // E = v^2/2 - omega^2 (x^2 + y^2)/2 - mu/r has dE/dt = v.a - omega^2 (x vx
  // + y vy) + mu (r.v)/r^3 = 0 along uncontrolled trajectories; check the
  // identity pointwise from the produced accelerations.
  DynamicsModel model = DynamicsModel::transfer(dynamics::TransferParams{});
  CounterRng rng(32, 0);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> x(6);
    for (int i = 0; i < 3; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(0.4, 2.0);
    for (int i = 3; i < 6; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-0.8, 0.8);
    const auto dx = eval_scalar_rhs(model, nullptr, x);
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    const double rdotv = x[0] * x[3] + x[1] * x[4] + x[2] * x[5];
    const double vdota = x[3] * dx[3] + x[4] * dx[4] + x[5] * dx[5];
    const double dE = vdota - (x[0] * x[3] + x[1] * x[4]) + rdotv / (r2 * std::sqrt(r2));
    CHECK(dE == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("lander dynamics match an independent throttle and mass-flow oracle") {
  dynamics::LanderParams lp;
  DynamicsModel model = DynamicsModel::lander(lp);
  netpoly::PolicyNet policy = testfix::lander_policy(4);
  const dynamics::LanderModel& lm = *model.as_lander();
  const double lscale = lm.length_scale();
  const double tscale = lm.time_scale();
  const double vscale = lscale / tscale;
  const double om = lp.spin_rate * tscale;

  CounterRng rng(33, 0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> x(7);
    for (int i = 0; i < 3; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(0.8, 2.0);
    for (int i = 3; i < 6; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-0.3, 0.3);
    x[6] = rng.uniform(0.8, 1.0);
    const auto got = eval_scalar_rhs(model, &policy, x);

    // Reference: kinematics, rotating-frame gravity, net-commanded thrust.
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    const double ir3 = 1.0 / (r2 * std::sqrt(r2));
    std::array<double, 7> want{};
    want[0] = x[3];
    want[1] = x[4];
    want[2] = x[5];
    want[3] = 2.0 * om * x[4] + om * om * x[0] - x[0] * ir3;
    want[4] = -2.0 * om * x[3] + om * om * x[1] - x[1] * ir3;
    want[5] = -x[2] * ir3;
    const std::vector<double> feats{x[0] * lscale, x[1] * lscale, x[2] * lscale,
                                    x[3] * vscale, x[4] * vscale, x[5] * vscale,
                                    x[6] * lp.mass_ref};
    const auto out = netpoly::eval_net<double>(policy, feats);
    const double u = 1.0 / (1.0 + std::exp(-out[0]));
    const double dn = std::sqrt(out[1] * out[1] + out[2] * out[2] + out[3] * out[3]);
    const double thrust_s = lp.thrust_max * tscale * tscale / (lscale * lp.mass_ref);
    const double acc = u * thrust_s / x[6];
    want[3] += acc * out[1] / dn;
    want[4] += acc * out[2] / dn;
    want[5] += acc * out[3] / dn;
    want[6] = -u * lp.thrust_max * tscale / (lp.isp * lp.g0 * lp.mass_ref);

    for (int i = 0; i < 7; ++i)
      CHECK(got[static_cast<std::size_t>(i)] ==
            doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("lander rejects nonpositive mass under power") {
  DynamicsModel model = DynamicsModel::lander(dynamics::LanderParams{});
  netpoly::PolicyNet policy = testfix::lander_policy(4);
  std::vector<double> x{1.5, 0.2, 0.1, 0.0, 0.0, 0.0, -0.01};
  CHECK_THROWS_AS((void)eval_scalar_rhs(model, &policy, x), numerical_error);
}

TEST_CASE("drone dynamics match an independent rigid-body oracle") {
  const dynamics::DroneParams dp = testfix::drone_params();
  DynamicsModel model = DynamicsModel::drone(dp);
  netpoly::PolicyNet policy = testfix::drone_policy(5);

  CounterRng rng(34, 0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> x(16);
    for (int i = 0; i < 3; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-2.0, 2.0);
    for (int i = 3; i < 6; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-3.0, 3.0);
    for (int i = 6; i < 9; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-0.5, 0.5);
    for (int i = 9; i < 12; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
    for (int i = 12; i < 16; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(400.0, 800.0);
    const auto got = eval_scalar_rhs(model, &policy, x);

    // Reference model written out longhand.
    const double sph = std::sin(x[6]), cph = std::cos(x[6]);
    const double sth = std::sin(x[7]), cth = std::cos(x[7]);
    const double sps = std::sin(x[8]), cps = std::cos(x[8]);
    const double R[3][3] = {
        {cps * cth, cps * sth * sph - sps * cph, cps * sth * cph + sps * sph},
        {sps * cth, sps * sth * sph + cps * cph, sps * sth * cph - cps * sph},
        {-sth, cth * sph, cth * cph}};
    const double vw[3] = {x[3], x[4], x[5]};
    double vb[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) vb[i] += R[j][i] * vw[j];  // R^T v

    const double w[4] = {x[12], x[13], x[14], x[15]};
    const double wsum = w[0] + w[1] + w[2] + w[3];
    const double wss = w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + w[3] * w[3];
    const double F[3] = {
        -dp.k_x * vb[0] * wsum,
        -dp.k_y * vb[1] * wsum,
        -dp.k_omega * wss - dp.k_z * vb[2] * wsum - dp.k_h * (vb[0] * vb[0] + vb[1] * vb[1])};

    std::array<double, 16> want{};
    want[0] = x[3];
    want[1] = x[4];
    want[2] = x[5];
    for (int i = 0; i < 3; ++i) {
      double a = 0.0;
      for (int j = 0; j < 3; ++j) a += R[i][j] * F[j];
      want[static_cast<std::size_t>(3 + i)] = a / dp.mass + (i == 2 ? dp.gravity : 0.0);
    }
    const double pb = x[9], qb = x[10], rb = x[11];
    want[6] = pb + (qb * sph + rb * cph) * sth / cth;
    want[7] = qb * cph - rb * sph;
    want[8] = (qb * sph + rb * cph) / cth;

    const auto out = netpoly::eval_net<double>(policy, x);
    double cmd[4];
    for (int i = 0; i < 4; ++i) {
      const double s = 1.0 / (1.0 + std::exp(-out[static_cast<std::size_t>(i)]));
      cmd[i] = dp.omega_min + s * (dp.omega_max - dp.omega_min);
    }
    for (int i = 0; i < 4; ++i)
      want[static_cast<std::size_t>(12 + i)] = (cmd[i] - w[i]) / dp.rotor_tau;

    const double mx = dp.k_p * (w[0] * w[0] - w[1] * w[1] - w[2] * w[2] + w[3] * w[3]) + dp.k_pv * vb[1];
    const double my = dp.k_q * (w[0] * w[0] + w[1] * w[1] - w[2] * w[2] - w[3] * w[3]) + dp.k_qv * vb[0];
    const double s1 = -w[0] + w[1] - w[2] + w[3];
    const double s1c = -cmd[0] + cmd[1] - cmd[2] + cmd[3];
    const double mz = dp.k_r1 * s1 + dp.k_r2 * (s1c - s1) / dp.rotor_tau - dp.k_rr * rb;
    want[9] = (mx - (dp.inertia_z - dp.inertia_y) * qb * rb) / dp.inertia_x;
    want[10] = (my - (dp.inertia_x - dp.inertia_z) * pb * rb) / dp.inertia_y;
    want[11] = (mz - (dp.inertia_y - dp.inertia_x) * pb * qb) / dp.inertia_z;

    for (int i = 0; i < 16; ++i)
      CHECK(got[static_cast<std::size_t>(i)] ==
            doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-11));
  }
}

TEST_CASE("drone kinematics reject the Euler singularity") {
  DynamicsModel model = DynamicsModel::drone(testfix::drone_params());
  std::vector<double> x(16, 0.0);
  x[7] = M_PI / 2.0;  // pitch straight up
  for (int i = 12; i < 16; ++i) x[static_cast<std::size_t>(i)] = 600.0;
  CHECK_THROWS_AS((void)eval_scalar_rhs(model, nullptr, x), numerical_error);
}

TEST_CASE("jet right-hand sides linearize the scalar ones") {
  // First-degree jet coefficients must match central finite differences of
  // the scalar rhs, and degree zero must match it bit for bit.
  struct Scenario {
    DynamicsModel model;
    netpoly::PolicyNet policy;
    std::vector<double> x;
  };
  std::vector<Scenario> scenarios;
  scenarios.push_back({DynamicsModel::transfer(dynamics::TransferParams{}), testfix::transfer_policy(7),
                       {1.2, -0.3, 0.1, 0.2, 0.9, -0.05}});
  scenarios.push_back({DynamicsModel::lander(dynamics::LanderParams{}), testfix::lander_policy(8),
                       {1.4, 0.5, 0.3, 0.1, -0.2, 0.05, 0.95}});
  {
    std::vector<double> x(16, 0.0);
    x[3] = 1.0; x[4] = -0.5; x[5] = 0.3;
    x[6] = 0.1; x[7] = -0.2; x[8] = 0.3;
    x[9] = 0.4; x[10] = -0.3; x[11] = 0.2;
    for (int i = 12; i < 16; ++i) x[static_cast<std::size_t>(i)] = 600.0;
    scenarios.push_back({DynamicsModel::drone(testfix::drone_params()), testfix::drone_policy(9), std::move(x)});
  }

  for (Scenario& sc : scenarios) {
    const int n = static_cast<int>(sc.x.size());
    auto jets = testfix::state_jets(sc.x, 2);
    auto jet_rhs = sc.model.prepared_rhs<TPoly>(&sc.policy, nullptr, jets[0]);
    std::vector<TPoly> dj(static_cast<std::size_t>(n));
    jet_rhs(jets, dj);
    const auto scalar = eval_scalar_rhs(sc.model, &sc.policy, sc.x);

    for (int k = 0; k < n; ++k) {
      CHECK(dj[static_cast<std::size_t>(k)].coeff0() == scalar[static_cast<std::size_t>(k)]);
      for (int i = 0; i < n; ++i) {
        // Scale-aware step: rotor speeds are O(600), everything else O(1).
        const double eps = (std::abs(sc.x[static_cast<std::size_t>(i)]) > 10.0) ? 1e-3 : 1e-6;
        std::vector<double> xp = sc.x, xm = sc.x;
        xp[static_cast<std::size_t>(i)] += eps;
        xm[static_cast<std::size_t>(i)] -= eps;
        const double fd = (eval_scalar_rhs(sc.model, &sc.policy, xp)[static_cast<std::size_t>(k)] -
                           eval_scalar_rhs(sc.model, &sc.policy, xm)[static_cast<std::size_t>(k)]) /
                          (2.0 * eps);
        std::vector<int> alpha(static_cast<std::size_t>(n), 0);
        alpha[static_cast<std::size_t>(i)] = 1;
        const double jc = dj[static_cast<std::size_t>(k)].coeff(alpha);
        CHECK(jc == doctest::Approx(fd).epsilon(2e-5).scale(std::max(1.0, std::abs(jc))));
      }
    }
  }
}

TEST_CASE("parameter overrides enter the dynamics as jets") {
  // Seed thrust_accel = nominal + delta (SI) as a one-variable jet; the
  // derivative of the acceleration with respect to delta must match a finite
  // difference across two scalar models with perturbed parameters.
  dynamics::TransferParams tp;
  DynamicsModel model = DynamicsModel::transfer(tp);
  netpoly::PolicyNet policy = testfix::transfer_policy(11);
  const std::vector<double> x{1.1, -0.2, 0.05, 0.1, 0.95, 0.0};

  const int n = 1;  // one perturbation variable: the parameter
  dynamics::ParamJets<TPoly> jets;
  jets.emplace("thrust_accel", TPoly::constant(n, 2, tp.thrust_accel) + TPoly::variable(n, 2, 0));
  std::vector<TPoly> xj;
  for (double v : x) xj.push_back(TPoly::constant(n, 2, v));
  auto rhs = model.prepared_rhs<TPoly>(&policy, &jets, xj[0]);
  std::vector<TPoly> dj(6);
  rhs(xj, dj);

  const double h = 1e-9;
  dynamics::TransferParams tp_p = tp, tp_m = tp;
  tp_p.thrust_accel += h;
  tp_m.thrust_accel -= h;
  DynamicsModel model_p = DynamicsModel::transfer(tp_p);
  DynamicsModel model_m = DynamicsModel::transfer(tp_m);
  for (int k = 3; k < 6; ++k) {
    const double fd = (eval_scalar_rhs(model_p, &policy, x)[static_cast<std::size_t>(k)] -
                       eval_scalar_rhs(model_m, &policy, x)[static_cast<std::size_t>(k)]) /
                      (2.0 * h);
    const std::array<int, 1> alpha{1};
    CHECK(dj[static_cast<std::size_t>(k)].coeff(std::span<const int>(alpha)) ==
          doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("nominal parameter lookup covers every declared name") {
  const dynamics::TransferParams tp;
  DynamicsModel transfer = DynamicsModel::transfer(tp);
  CHECK(transfer.param_nominal("mu_sun") == tp.mu_sun);
  CHECK(transfer.param_nominal("thrust_accel") == tp.thrust_accel);
  CHECK_THROWS_AS((void)transfer.param_nominal("mu"), std::invalid_argument);

  const dynamics::LanderParams lp;
  DynamicsModel lander = DynamicsModel::lander(lp);
  CHECK(lander.param_nominal("mu") == lp.mu);
  CHECK(lander.param_nominal("thrust_max") == lp.thrust_max);
  CHECK(lander.param_nominal("isp") == lp.isp);

  const dynamics::DroneParams dp = testfix::drone_params();
  DynamicsModel drone = DynamicsModel::drone(dp);
  for (const std::string& name : drone.param_names()) CHECK(std::isfinite(drone.param_nominal(name)));
  CHECK(drone.param_nominal("rotor_tau") == dp.rotor_tau);
  CHECK_THROWS_AS((void)drone.param_nominal("gravity"), std::invalid_argument);
}

TEST_CASE("unknown parameter overrides are rejected") {
  DynamicsModel model = DynamicsModel::transfer(dynamics::TransferParams{});
  dynamics::ParamJets<double> ov{{"warp_factor", 9.0}};
  CHECK_THROWS_AS((void)model.prepared_rhs<double>(nullptr, &ov, 0.0), std::invalid_argument);
}

TEST_CASE("policy pairing is validated structurally") {
  DynamicsModel transfer = DynamicsModel::transfer(dynamics::TransferParams{});
  netpoly::PolicyNet wrong_width = testfix::lander_policy(1);  // 7 inputs vs 6 states
  CHECK_THROWS_AS(transfer.validate_policy_pairing(&wrong_width), std::invalid_argument);

  netpoly::PolicyNet wrong_wiring = testfix::transfer_policy(1);
  wrong_wiring.wiring = netpoly::OutputWiring::raw;
  CHECK_THROWS_AS(transfer.validate_policy_pairing(&wrong_wiring), std::invalid_argument);

  transfer.validate_policy_pairing(nullptr);  // coasting is always fine
}

TEST_CASE("incomplete drone parameters are rejected at construction") {
  dynamics::DroneParams p = testfix::drone_params();
  p.k_h = NAN;
  CHECK_THROWS_AS((void)DynamicsModel::drone(p), std::invalid_argument);
  p = testfix::drone_params();
  p.omega_max = p.omega_min;  // empty command band
  CHECK_THROWS_AS((void)DynamicsModel::drone(p), std::invalid_argument);
}

TEST_CASE("custom models run a user right-hand side on both algebras") {
  auto model = DynamicsModel::custom_generic("cubic-decay", {"x"},
                                             [](auto x, auto dx) { dx[0] = -(x[0] * x[0] * x[0]); });
  const std::vector<double> x{2.0};
  CHECK(eval_scalar_rhs(model, nullptr, x)[0] == doctest::Approx(-8.0));
  CHECK(model.state_dim() == 1);
  CHECK(model.time_scale() == 1.0);

  auto jets = testfix::state_jets(x, 3);
  auto jrhs = model.prepared_rhs<TPoly>(nullptr, nullptr, jets[0]);
  std::vector<TPoly> dj(1);
  jrhs(jets, dj);
  // -(2 + d)^3 = -8 - 12 d - 6 d^2 - d^3.
  CHECK(dj[0].coeff0() == doctest::Approx(-8.0));
  const std::array<int, 1> a1{1}, a2{2}, a3{3};
  CHECK(dj[0].coeff(std::span<const int>(a1)) == doctest::Approx(-12.0));
  CHECK(dj[0].coeff(std::span<const int>(a2)) == doctest::Approx(-6.0));
  CHECK(dj[0].coeff(std::span<const int>(a3)) == doctest::Approx(-1.0));

  netpoly::PolicyNet policy = testfix::transfer_policy(2);
  CHECK_THROWS_AS(model.validate_policy_pairing(&policy), std::invalid_argument);
}
