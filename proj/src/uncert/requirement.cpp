#include "ettk/uncert/requirement.hpp"

#include <cmath>
#include <stdexcept>

#include "ettk/errors.hpp"
#include "ettk/rng.hpp"

namespace ettk::uncert {

namespace {

/// Cyclic Jacobi eigendecomposition of a small symmetric matrix a (row-major
/// n x n, destroyed); eigenvectors land in the columns of v.
void jacobi_eigen(std::vector<double>& a, std::vector<double>& v, std::vector<double>& eig, std::size_t n) {
  v.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = 0.5 * (a[q * n + q] - a[p * n + p]) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
  }
  eig.resize(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
}

bool satisfied(const Predicate& pred, std::span<const double> x) {
  if (const auto* p = std::get_if<NormPredicate>(&pred)) {
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    return std::sqrt(s) <= p->bound;
  }
  const auto& b = std::get<BoxPredicate>(pred);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < b.lo[i] || x[i] > b.hi[i]) return false;
  return true;
}

}  // namespace

RequirementResult requirement_check(const MomentSet& moments, std::span<const int> components,
                                    const Predicate& predicate, long n_samples, std::uint64_t seed) {
  if (components.empty()) throw std::invalid_argument("requirement_check: empty component subset");
  if (n_samples < 1) throw std::invalid_argument("requirement_check: n_samples must be >= 1");
  if (moments.covariance.empty()) throw std::invalid_argument("requirement_check: MomentSet lacks a covariance");
  const std::size_t dim = components.size();
  const std::size_t full = moments.mean.size();
  for (int c : components)
    if (c < 0 || static_cast<std::size_t>(c) >= full)
      throw std::invalid_argument("requirement_check: component index out of range");
  if (const auto* b = std::get_if<BoxPredicate>(&predicate))
    if (b->lo.size() != dim || b->hi.size() != dim)
      throw std::invalid_argument("requirement_check: box predicate dimension mismatches subset");

  // Subset moments in physical units.
  const std::vector<double> mean_f = moments.mean_physical();
  const std::vector<double> cov_f = moments.covariance_physical();
  std::vector<double> mu(dim);
  std::vector<double> sigma(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    mu[i] = mean_f[static_cast<std::size_t>(components[i])];
    for (std::size_t j = 0; j < dim; ++j)
      sigma[i * dim + j] =
          cov_f[static_cast<std::size_t>(components[i]) * full + static_cast<std::size_t>(components[j])];
  }

  std::vector<double> work = sigma;
  std::vector<double> vecs, eig;
  jacobi_eigen(work, vecs, eig, dim);
  double eig_max = 0.0;
  for (double e : eig) eig_max = std::max(eig_max, std::abs(e));
  const double clamp_tol = 1e-10 * std::max(1.0, eig_max);
  for (double& e : eig) {
    if (e < -clamp_tol)
      throw numerical_error("requirement_check: covariance indefinite (eigenvalue " + std::to_string(e) + ")");
    e = std::max(e, 0.0);
  }
  // Factor L = V sqrt(Lambda): samples are mu + L z with z standard normal.
  std::vector<double> factor(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) factor[i * dim + j] = vecs[i * dim + j] * std::sqrt(eig[j]);

  RequirementResult res;
  res.n_samples = n_samples;
  res.seed = seed;
  std::vector<double> z(dim), x(dim);
  for (long s = 0; s < n_samples; ++s) {
    CounterRng rng(seed, static_cast<std::uint64_t>(s));
    for (std::size_t i = 0; i < dim; ++i) z[i] = rng.normal();
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = mu[i];
      for (std::size_t j = 0; j < dim; ++j) acc += factor[i * dim + j] * z[j];
      x[i] = acc;
    }
    if (satisfied(predicate, x)) ++res.satisfied;
  }
  res.fraction = static_cast<double>(res.satisfied) / static_cast<double>(n_samples);
  res.std_error = std::sqrt(std::max(0.0, res.fraction * (1.0 - res.fraction) / static_cast<double>(n_samples)));
  return res;
}

}  // namespace ettk::uncert
