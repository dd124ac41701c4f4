#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "ettk/errors.hpp"
#include "ettk/polyalg/taylor_map.hpp"
#include "ettk/polyalg/tpoly.hpp"
#include "ettk/rng.hpp"
#include "ettk/uncert/moments.hpp"
#include "ettk/uncert/radius.hpp"
#include "ettk/uncert/requirement.hpp"

using namespace ettk;
using polyalg::TaylorMap;
using polyalg::TPoly;
using uncert::Restriction;
using uncert::UniformBox;

namespace {

/// Univariate polynomial with prescribed coefficients c[k] on x^k.
TPoly series1(std::span<const double> c, int order) {
  TPoly p = TPoly::constant(1, order, 0.0);
  auto span = p.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) span[k] = c[k];
  return p;
}

/// 10-point Gauss-Legendre nodes/weights on [-1, 1]; exact for degree <= 19.
constexpr std::array<double, 5> kGlx{0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                     0.8650633666889845, 0.9739065285171717};
constexpr std::array<double, 5> kGlw{0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                     0.1494513491505806, 0.0666713443086881};

/// E[f(x)] for x ~ U[a, b] by Gauss-Legendre (exact for polynomial f of
/// degree <= 19). Independent of the moment-generating-function path.
template <class F>
double gl_expect(double a, double b, F&& f) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGlx.size(); ++i)
    acc += kGlw[i] * (f(mid + half * kGlx[i]) + f(mid - half * kGlx[i]));
  return 0.5 * acc;
}

/// Tensor-product expectation of f(delta) over a uniform box (each factor
/// exact for per-variable degree <= 19).
template <class F>
double gl_expect_box(const UniformBox& box, F&& f) {
  const int n = box.dim();
  std::vector<double> point(static_cast<std::size_t>(n));
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i < kGlx.size(); ++i) {
    nodes.push_back(kGlx[i]);
    weights.push_back(kGlw[i]);
    nodes.push_back(-kGlx[i]);
    weights.push_back(kGlw[i]);
  }
  double acc = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      const double mid = 0.5 * (box.lo[static_cast<std::size_t>(d)] + box.hi[static_cast<std::size_t>(d)]);
      const double half = 0.5 * (box.hi[static_cast<std::size_t>(d)] - box.lo[static_cast<std::size_t>(d)]);
      point[static_cast<std::size_t>(d)] = mid + half * nodes[idx[static_cast<std::size_t>(d)]];
      w *= 0.5 * weights[idx[static_cast<std::size_t>(d)]];
    }
    acc += w * f(point);
    int d = 0;
    for (; d < n; ++d) {
      if (++idx[static_cast<std::size_t>(d)] < nodes.size()) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
    if (d == n) break;
  }
  return acc;
}

TPoly random_poly(int nvars, int order, std::uint64_t seed) {
  TPoly p = TPoly::constant(nvars, order, 0.0);
  CounterRng rng(seed, 0xabc);
  for (double& c : p.coeffs()) c = rng.uniform(-1.0, 1.0);
  return p;
}

/// Direct slice-norm recomputation from exponents and plain factorials; an
/// independent arithmetic path for the weighted root test.
double brute_weighted_slice(const TPoly& p, int k) {
  const auto& table = p.table();
  const auto c = p.coeffs();
  double best = 0.0;
  for (std::size_t r = table.offset(k); r < table.offset(k + 1); ++r) {
    if (c[r] == 0.0) continue;
    const auto alpha = table.exponents(r);
    double alpha_fact = 1.0;
    for (std::uint8_t e : alpha)
      for (int q = 2; q <= static_cast<int>(e); ++q) alpha_fact *= q;
    double k_fact = 1.0;
    for (int q = 2; q <= k; ++q) k_fact *= q;
    const double w = (k > 1) ? std::sqrt(alpha_fact / k_fact) : 1.0;
    best = std::max(best, std::abs(c[r]) * w);
  }
  return best;
}

}  // namespace

TEST_CASE("root-test radius is exact on geometric series") {
  std::vector<double> ones(11, 1.0);
  auto est = uncert::ch_radius(series1(ones, 10));
  REQUIRE(est.orders.size() == 10);
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    CHECK(est.orders[i] == static_cast<int>(i) + 1);
    // The factorial weight evaluates through logs, so exactness is to ulps.
    CHECK(est.values[i] == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(est.headline() == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> geo(11);
  for (int k = 0; k <= 10; ++k) geo[static_cast<std::size_t>(k)] = std::pow(2.0, k);
  auto half = uncert::ch_radius(series1(geo, 10));
  for (double v : half.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));

  // Ratio diagnostic on consecutive slices is the plain coefficient ratio.
  auto ratio = uncert::ratio_radius(series1(geo, 10));
  REQUIRE(ratio.orders.size() == 10);
  for (double v : ratio.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("radius estimates on the exponential series increase toward infinity") {
  std::vector<double> c(9);
  c[0] = 1.0;
  for (int k = 1; k <= 8; ++k) c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] / k;
  const TPoly e = series1(c, 8);

  auto est = uncert::ch_radius(e);
  REQUIRE(est.orders.back() == 8);
  CHECK(est.headline() == doctest::Approx(std::pow(40320.0, 0.125)).epsilon(1e-13));
  for (std::size_t i = 1; i < est.values.size(); ++i) CHECK(est.values[i] > est.values[i - 1]);

  // Ratio entries are exactly k for the exponential: M_{k-1} / M_k = k.
  auto ratio = uncert::ratio_radius(e);
  REQUIRE(ratio.orders.size() == 8);
  for (std::size_t i = 0; i < ratio.orders.size(); ++i) {
    CHECK(ratio.orders[i] == static_cast<int>(i) + 1);
    CHECK(ratio.values[i] == doctest::Approx(static_cast<double>(i + 1)).epsilon(1e-15));
  }
}

TEST_CASE("zero slices leave gaps and the ratio test normalizes across them") {
  // sin: nonzero slices at odd degrees only.
  std::vector<double> c(8, 0.0);
  c[1] = 1.0;
  c[3] = -1.0 / 6.0;
  c[5] = 1.0 / 120.0;
  c[7] = -1.0 / 5040.0;
  const TPoly s = series1(c, 7);

  auto est = uncert::ch_radius(s);
  CHECK(est.orders == std::vector<int>{1, 3, 5, 7});
  CHECK(std::isnan(est.at_order(2)));
  CHECK(std::isnan(est.at_order(4)));
  CHECK(est.at_order(3) == doctest::Approx(std::pow(6.0, 1.0 / 3.0)).epsilon(1e-14));

  // Gap normalization: (M_j / M_k)^{1/(k-j)} over the two-degree gaps.
  auto ratio = uncert::ratio_radius(s);
  CHECK(ratio.orders == std::vector<int>{3, 5, 7});
  CHECK(ratio.values[0] == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(ratio.values[1] == doctest::Approx(std::sqrt(20.0)).epsilon(1e-14));
  CHECK(ratio.values[2] == doctest::Approx(std::sqrt(42.0)).epsilon(1e-14));
}

TEST_CASE("multivariate slice norms carry the factorial weight") {
  // (x + y)^2: the balanced coefficient dominates after weighting, giving
  // M_2 = 2 sqrt(1/2) = sqrt(2) and r_2 = 2^{-1/4}.
  TPoly p = TPoly::variable(2, 3, 0) + TPoly::variable(2, 3, 1);
  auto est2 = uncert::ch_radius(p * p);
  CHECK(est2.at_order(2) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));

  auto est3 = uncert::ch_radius(p * p * p);
  CHECK(est3.at_order(3) == doctest::Approx(std::pow(3.0, -1.0 / 6.0)).epsilon(1e-14));

  // Brute-force factorial arithmetic agrees on random polynomials.
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    const TPoly q = random_poly(3, 5, seed);
    auto est = uncert::ch_radius(q);
    for (std::size_t i = 0; i < est.orders.size(); ++i) {
      const int k = est.orders[i];
      const double want = std::pow(brute_weighted_slice(q, k), -1.0 / k);
      CHECK(est.values[i] == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("single-variable restrictions ignore cross terms and drop the weight") {
  // p = sum 2^i x^i + sum 3^j y^j + 5xy: sections recover each axis scale.
  TPoly p = TPoly::constant(2, 6, 0.0);
  {
    auto c = p.coeffs();
    const auto& table = p.table();
    for (std::size_t r = 0; r < c.size(); ++r) {
      const auto a = table.exponents(r);
      if (a[1] == 0)
        c[r] = std::pow(2.0, a[0]);
      else if (a[0] == 0)
        c[r] = std::pow(3.0, a[1]);
    }
    std::array<int, 2> xy{1, 1};
    p.set_coeff(std::span<const int>(xy), 5.0);
  }
  auto rx = uncert::ch_radius(p, Restriction::single(0));
  for (double v : rx.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
  auto ry = uncert::ch_radius(p, Restriction::single(1));
  for (double v : ry.values) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  CHECK_THROWS_AS((void)uncert::ch_radius(p, Restriction::single(2)), std::invalid_argument);
  CHECK_THROWS_AS((void)uncert::ch_radius(TPoly::constant(2, 4, 3.0)), std::invalid_argument);
  CHECK_THROWS_AS((void)uncert::ratio_radius(TPoly::constant(2, 4, 3.0)), std::invalid_argument);
}

TEST_CASE("radius estimators are scale covariant") {
  const double s = 2.0;
  const TPoly p = random_poly(2, 6, 99);
  TPoly q = p;
  {
    auto c = q.coeffs();
    const auto& table = q.table();
    for (std::size_t r = 0; r < c.size(); ++r) c[r] *= std::pow(s, table.degree(r));
  }
  auto ep = uncert::ch_radius(p);
  auto eq = uncert::ch_radius(q);
  REQUIRE(ep.orders == eq.orders);
  for (std::size_t i = 0; i < ep.values.size(); ++i)
    CHECK(eq.values[i] == doctest::Approx(ep.values[i] / s).epsilon(1e-12));

  auto rp = uncert::ratio_radius(p);
  auto rq = uncert::ratio_radius(q);
  REQUIRE(rp.orders == rq.orders);
  for (std::size_t i = 0; i < rp.values.size(); ++i)
    CHECK(rq.values[i] == doctest::Approx(rp.values[i] / s).epsilon(1e-12));
}

TEST_CASE("per-state sweep reports sections, physical units and unbounded rows") {
  const int k = 8;
  TPoly affine = TPoly::constant(2, k, 1.0) + 0.5 * TPoly::variable(2, k, 0) + 2.0 * TPoly::variable(2, k, 1);
  TPoly logish = TPoly::constant(2, k, 0.0);
  {
    auto c = logish.coeffs();
    const auto& table = logish.table();
    for (std::size_t r = 0; r < c.size(); ++r) {
      const auto a = table.exponents(r);
      if (a[1] == 0 && a[0] >= 1)
        c[r] = ((a[0] % 2 == 1) ? 1.0 : -1.0) * std::pow(0.5, a[0]) / a[0];  // ln(1 + d0/2)
    }
  }
  TaylorMap map({affine, logish}, {"dx", "dv"});
  const std::vector<double> units{10.0, 1.0};
  const std::vector<std::string> comp_labels{"a", "b"};
  auto sweep = uncert::per_state_radius_sweep(map, k, units, comp_labels);
  REQUIRE(sweep.size() == 4);  // 2 components x 2 variables

  // Affine component: entire along both variables.
  CHECK(sweep[0].unbounded);
  CHECK(std::isinf(sweep[0].headline()));
  CHECK(sweep[1].unbounded);

  // Log-like component along d0: r_j = 2 j^{1/j}, tending to the true radius 2.
  const auto& row = sweep[2];
  CHECK(row.component == 1);
  CHECK(row.variable == 0);
  CHECK(row.component_label == "b");
  CHECK(row.variable_label == "dx");
  CHECK_FALSE(row.unbounded);
  for (std::size_t i = 0; i < row.scaled.orders.size(); ++i) {
    const double j = row.scaled.orders[i];
    CHECK(row.scaled.values[i] == doctest::Approx(2.0 * std::pow(j, 1.0 / j)).epsilon(1e-13));
    CHECK(row.physical.values[i] == doctest::Approx(10.0 * row.scaled.values[i]).epsilon(1e-15));
  }
  CHECK(row.headline() == doctest::Approx(2.0 * std::pow(8.0, 0.125)).epsilon(1e-13));
  CHECK(row.physical_headline() == doctest::Approx(10.0 * row.headline()).epsilon(1e-15));

  // No d1 dependence in the log-like component at all.
  CHECK(sweep[3].unbounded);

  CHECK_THROWS_AS((void)uncert::per_state_radius_sweep(map, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)uncert::per_state_radius_sweep(map, k, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("uniform raw moments match quadrature and closed forms") {
  CHECK(uncert::uniform_raw_moment(335.0, 370.0, 1) == doctest::Approx(352.5).epsilon(1e-15));
  CHECK(uncert::uniform_raw_moment(-1.0, 1.0, 0) == 1.0);
  for (int n = 1; n <= 15; n += 2) CHECK(uncert::uniform_raw_moment(-1.0, 1.0, n) == 0.0);
  for (int n = 2; n <= 16; n += 2)
    CHECK(uncert::uniform_raw_moment(-1.0, 1.0, n) == doctest::Approx(1.0 / (n + 1)).epsilon(1e-15));

  // Asymmetric interval against an independent Gauss-Legendre expectation.
  for (int n = 0; n <= 16; ++n) {
    const double want = gl_expect(0.3, 2.1, [n](double x) { return std::pow(x, n); });
    CHECK(uncert::uniform_raw_moment(0.3, 2.1, n) == doctest::Approx(want).epsilon(1e-13));
  }

  CHECK_THROWS_AS((void)uncert::uniform_raw_moment(1.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)uncert::uniform_raw_moment(2.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)uncert::uniform_raw_moment(0.0, 1.0, -1), std::invalid_argument);
}

TEST_CASE("expected monomials factorize over independent variables") {
  UniformBox box{{-1.0, -1.0}, {1.0, 1.0}, {}};
  const std::array<int, 2> odd{1, 1};
  CHECK(uncert::expected_monomial(box, std::span<const int>(odd)) == 0.0);
  const std::array<int, 2> sq{2, 2};
  CHECK(uncert::expected_monomial(box, std::span<const int>(sq)) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  const std::array<int, 2> zero{0, 0};
  CHECK(uncert::expected_monomial(box, std::span<const int>(zero)) == 1.0);

  const std::array<int, 1> short_alpha{2};
  CHECK_THROWS_AS((void)uncert::expected_monomial(box, std::span<const int>(short_alpha)), std::invalid_argument);
  const std::array<int, 2> neg{-1, 0};
  CHECK_THROWS_AS((void)uncert::expected_monomial(box, std::span<const int>(neg)), std::invalid_argument);
}

TEST_CASE("mean and variance of a quadratic map are exact rationals") {
  // p(z) = z + z^2 over U[-1, 1]: mean 1/3, variance 19/45.
  TPoly z = TPoly::variable(1, 2, 0);
  TaylorMap map({z + z * z}, {"dz"});
  UniformBox box{{-1.0}, {1.0}, {}};
  auto mom = uncert::propagate_moments(map, box, 4);
  CHECK(mom.mean[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mom.cov(0, 0) == doctest::Approx(19.0 / 45.0).epsilon(1e-14));
  CHECK_FALSE(mom.variance_clamped);
  CHECK_FALSE(mom.radius_warning);

  // Central moments 3 and 4 against Gauss-Legendre on the centered power.
  REQUIRE(mom.central.size() == 1);
  REQUIRE(mom.central[0].size() == 2);
  const double mu = 1.0 / 3.0;
  const double m3 = gl_expect(-1.0, 1.0, [&](double x) { return std::pow(x + x * x - mu, 3); });
  const double m4 = gl_expect(-1.0, 1.0, [&](double x) { return std::pow(x + x * x - mu, 4); });
  CHECK(mom.central[0][0] == doctest::Approx(m3).epsilon(1e-13));
  CHECK(mom.central[0][1] == doctest::Approx(m4).epsilon(1e-13));
}

TEST_CASE("propagated moments of random maps match tensor quadrature") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int nvars = (seed % 2 == 0) ? 2 : 3;
    std::vector<TPoly> comps;
    for (int c = 0; c < 3; ++c) comps.push_back(random_poly(nvars, 4, 1000 * seed + static_cast<std::uint64_t>(c)));
    std::vector<std::string> labels;
    for (int v = 0; v < nvars; ++v) labels.push_back("d" + std::to_string(v));
    TaylorMap map(comps, labels);

    UniformBox box;
    CounterRng brng(seed, 0xb0c);
    for (int v = 0; v < nvars; ++v) {
      const double c = brng.uniform(-0.2, 0.2);
      const double h = brng.uniform(0.1, 0.6);
      box.lo.push_back(c - h);
      box.hi.push_back(c + h);
    }

    auto mom = uncert::propagate_moments(map, box, 2);
    for (int i = 0; i < 3; ++i) {
      const double want = gl_expect_box(box, [&](const std::vector<double>& d) { return map.component(i).eval(d); });
      CHECK(mom.mean[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-12));
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double want = gl_expect_box(box, [&](const std::vector<double>& d) {
          return (map.component(i).eval(d) - mom.mean[static_cast<std::size_t>(i)]) *
                 (map.component(j).eval(d) - mom.mean[static_cast<std::size_t>(j)]);
        });
        CHECK(mom.cov(i, j) == doctest::Approx(want).epsilon(1e-11));
        CHECK(mom.cov(j, i) == mom.cov(i, j));
      }
    for (int i = 0; i < 3; ++i) CHECK(mom.cov(i, i) >= 0.0);
  }
}

TEST_CASE("propagated covariance agrees with Monte Carlo sampling") {
  std::vector<TPoly> comps;
  for (int c = 0; c < 3; ++c) comps.push_back(random_poly(2, 3, 777 + static_cast<std::uint64_t>(c)));
  TaylorMap map(comps, {"d0", "d1"});
  UniformBox box{{-0.3, -0.5}, {0.4, 0.2}, {}};
  auto mom = uncert::propagate_moments(map, box, 2);

  const long n = 400'000;
  std::vector<double> sum(3, 0.0), sum2(9, 0.0);
  std::vector<double> d(2), y(3);
  for (long s = 0; s < n; ++s) {
    CounterRng rng(2024, static_cast<std::uint64_t>(s));
    d[0] = rng.uniform(box.lo[0], box.hi[0]);
    d[1] = rng.uniform(box.lo[1], box.hi[1]);
    y = map.eval(d);
    for (int i = 0; i < 3; ++i) {
      sum[static_cast<std::size_t>(i)] += y[static_cast<std::size_t>(i)];
      for (int j = 0; j < 3; ++j)
        sum2[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(j)] +=
            y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    }
  }
  for (int i = 0; i < 3; ++i) {
    const double mc_mean = sum[static_cast<std::size_t>(i)] / static_cast<double>(n);
    const double se = std::sqrt(mom.cov(i, i) / static_cast<double>(n));
    CHECK(std::abs(mc_mean - mom.mean[static_cast<std::size_t>(i)]) < 5.0 * se + 1e-12);
    for (int j = 0; j < 3; ++j) {
      const double mc_cov = sum2[static_cast<std::size_t>(i) * 3 + static_cast<std::size_t>(j)] /
                                static_cast<double>(n) -
                            mc_mean * sum[static_cast<std::size_t>(j)] / static_cast<double>(n);
      // Covariance sampling error ~ sqrt(var_i var_j / n); 6 sigma headroom.
      const double tol = 6.0 * std::sqrt(mom.cov(i, i) * mom.cov(j, j) / static_cast<double>(n)) + 1e-12;
      CHECK(std::abs(mc_cov - mom.cov(i, j)) < tol);
    }
  }
}

TEST_CASE("moment propagation validates shapes and labels") {
  TPoly z = TPoly::variable(1, 2, 0);
  TaylorMap map({z}, {"dz"});
  UniformBox wrong{{-1.0, -1.0}, {1.0, 1.0}, {}};
  CHECK_THROWS_AS((void)uncert::propagate_moments(map, wrong), std::invalid_argument);
  UniformBox bad_label{{-1.0}, {1.0}, {"other"}};
  CHECK_THROWS_AS((void)uncert::propagate_moments(map, bad_label), std::invalid_argument);
  UniformBox box{{-1.0}, {1.0}, {"dz"}};
  CHECK_THROWS_AS((void)uncert::propagate_moments(map, box, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)uncert::propagate_moments(map, box, 2, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);

  UniformBox inverted{{1.0}, {-1.0}, {}};
  CHECK_THROWS_AS(inverted.validate(), std::invalid_argument);
  UniformBox infinite{{0.0}, {std::numeric_limits<double>::infinity()}, {}};
  CHECK_THROWS_AS(infinite.validate(), std::invalid_argument);

  // Mean-only requests skip the covariance entirely.
  auto mean_only = uncert::propagate_moments(map, box, 1);
  CHECK(mean_only.covariance.empty());
  CHECK(mean_only.mean[0] == 0.0);
}

TEST_CASE("unit scales convert moments to physical values") {
  TPoly z = TPoly::variable(2, 2, 0);
  TPoly w = TPoly::variable(2, 2, 1);
  TaylorMap map({z + 1.0, w * w}, {"a", "b"});
  UniformBox box{{-1.0, -1.0}, {1.0, 1.0}, {}};
  const std::vector<double> units{2.0, 10.0};
  auto mom = uncert::propagate_moments(map, box, 2, units);
  CHECK(mom.mean_physical()[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mom.mean_physical()[1] == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
  const auto cp = mom.covariance_physical();
  CHECK(cp[0] == doctest::Approx(4.0 * mom.cov(0, 0)).epsilon(1e-15));
  CHECK(cp[3] == doctest::Approx(100.0 * mom.cov(1, 1)).epsilon(1e-15));
  CHECK(cp[1] == doctest::Approx(20.0 * mom.cov(0, 1)).epsilon(1e-15));
}

TEST_CASE("boxes beyond the estimated radius raise the advisory flag") {
  const int k = 8;
  TPoly logish = TPoly::constant(1, k, 0.0);
  {
    auto c = logish.coeffs();
    for (int j = 1; j <= k; ++j)
      c[static_cast<std::size_t>(j)] = ((j % 2 == 1) ? 1.0 : -1.0) * std::pow(0.5, j) / j;
  }
  TaylorMap map({logish}, {"dz"});
  // Finite-order estimate 2 * 8^{1/8} ~ 2.594: inside stays quiet.
  auto ok = uncert::propagate_moments(map, UniformBox{{-1.0}, {1.0}, {}});
  CHECK_FALSE(ok.radius_warning);
  auto outside = uncert::propagate_moments(map, UniformBox{{-3.0}, {3.0}, {}});
  CHECK(outside.radius_warning);

  // Affine maps are entire: no box can trip the warning.
  TaylorMap lin({TPoly::variable(1, 2, 0)}, {"dz"});
  auto big = uncert::propagate_moments(lin, UniformBox{{-1e9}, {1e9}, {}});
  CHECK_FALSE(big.radius_warning);
}

TEST_CASE("custom raw-moment providers reproduce non-uniform laws") {
  // Degenerate point mass at 0.5: E[z^n] = 0.5^n, so the map moments are just
  // its values there, with zero covariance.
  TPoly z = TPoly::variable(1, 3, 0);
  TaylorMap map({z + z * z * z}, {"dz"});
  auto mom = uncert::propagate_moments(map, [](int, int power) { return std::pow(0.5, power); }, 2);
  CHECK(mom.mean[0] == doctest::Approx(0.5 + 0.125).epsilon(1e-14));
  CHECK(mom.cov(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("requirement checks are exact for deterministic moment sets") {
  uncert::MomentSet mom;
  mom.mean = {0.1, 0.0};
  mom.covariance.assign(4, 0.0);
  const std::vector<int> both{0, 1};
  auto pass = uncert::requirement_check(mom, both, uncert::NormPredicate{0.5}, 1000, 7);
  CHECK(pass.fraction == 1.0);
  CHECK(pass.satisfied == 1000);
  CHECK(pass.std_error == 0.0);
  CHECK(pass.gaussian_assumption);
  auto fail = uncert::requirement_check(mom, both, uncert::NormPredicate{0.05}, 1000, 7);
  CHECK(fail.fraction == 0.0);
}

TEST_CASE("gaussian requirement fractions calibrate against normal quantiles") {
  uncert::MomentSet mom;
  mom.mean = {0.0};
  mom.covariance = {1.0};
  const std::vector<int> comp{0};
  const long n = 100'000;
  // Central 95% of the standard normal.
  auto res = uncert::requirement_check(mom, comp, uncert::BoxPredicate{{-1.959964}, {1.959964}}, n, 12345);
  const double se = std::sqrt(0.95 * 0.05 / static_cast<double>(n));
  CHECK(std::abs(res.fraction - 0.95) < 4.0 * se);
  CHECK(res.n_samples == n);
  CHECK(res.seed == 12345);

  // One-sided 84.13% (mean + one sigma).
  auto one = uncert::requirement_check(mom, comp, uncert::BoxPredicate{{-1e9}, {1.0}}, n, 99);
  CHECK(std::abs(one.fraction - 0.8413447) < 4.0 * std::sqrt(0.8413 * 0.1587 / static_cast<double>(n)));

  // Determinism in the seed.
  auto again = uncert::requirement_check(mom, comp, uncert::BoxPredicate{{-1.959964}, {1.959964}}, n, 12345);
  CHECK(again.satisfied == res.satisfied);
  auto other = uncert::requirement_check(mom, comp, uncert::BoxPredicate{{-1.959964}, {1.959964}}, n, 54321);
  CHECK(other.satisfied != res.satisfied);
}

TEST_CASE("requirement checks honor subsets, units and covariance structure") {
  uncert::MomentSet mom;
  mom.mean = {5.0, 0.1, -7.0};
  mom.covariance.assign(9, 0.0);
  mom.unit_scale = {0.5, 1.0, 1.0};
  // Physical mean of component 0 is 2.5: a bound of 3 passes only in
  // physical units.
  auto phys = uncert::requirement_check(mom, std::vector<int>{0}, uncert::NormPredicate{3.0}, 100, 1);
  CHECK(phys.fraction == 1.0);
  auto sub = uncert::requirement_check(mom, std::vector<int>{1}, uncert::NormPredicate{0.2}, 100, 1);
  CHECK(sub.fraction == 1.0);

  // Correlated pair: x - y has variance 2 (1 - rho); with rho = 0.99 nearly
  // all mass satisfies |x - y| <= 1, uncorrelated far less. Box on the pair
  // cannot express x - y, so instead check a tight box honors correlation:
  // P(|x| <= 1, |y| <= 1) is larger when strongly positively correlated.
  uncert::MomentSet corr;
  corr.mean = {0.0, 0.0};
  corr.covariance = {1.0, 0.99, 0.99, 1.0};
  uncert::MomentSet indep;
  indep.mean = {0.0, 0.0};
  indep.covariance = {1.0, 0.0, 0.0, 1.0};
  const uncert::BoxPredicate unit_box{{-1.0, -1.0}, {1.0, 1.0}};
  const std::vector<int> pair{0, 1};
  auto rc = uncert::requirement_check(corr, pair, unit_box, 50'000, 5);
  auto ri = uncert::requirement_check(indep, pair, unit_box, 50'000, 5);
  CHECK(rc.fraction > ri.fraction + 0.1);
  // Independent joint probability is (0.6827)^2.
  CHECK(std::abs(ri.fraction - 0.6827 * 0.6827) < 0.01);

  // Indefinite covariance is rejected.
  uncert::MomentSet bad;
  bad.mean = {0.0, 0.0};
  bad.covariance = {1.0, 2.0, 2.0, 1.0};
  CHECK_THROWS_AS((void)uncert::requirement_check(bad, pair, uncert::NormPredicate{1.0}, 100, 1), numerical_error);
}

TEST_CASE("requirement checks validate their inputs") {
  uncert::MomentSet mom;
  mom.mean = {0.0};
  mom.covariance = {1.0};
  const std::vector<int> comp{0};
  CHECK_THROWS_AS((void)uncert::requirement_check(mom, std::vector<int>{}, uncert::NormPredicate{1.0}, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)uncert::requirement_check(mom, comp, uncert::NormPredicate{1.0}, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)uncert::requirement_check(mom, std::vector<int>{3}, uncert::NormPredicate{1.0}, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)uncert::requirement_check(mom, comp, uncert::BoxPredicate{{-1.0, -1.0}, {1.0, 1.0}}, 10, 1),
      std::invalid_argument);
  uncert::MomentSet no_cov;
  no_cov.mean = {0.0};
  CHECK_THROWS_AS((void)uncert::requirement_check(no_cov, comp, uncert::NormPredicate{1.0}, 10, 1),
                  std::invalid_argument);
}
