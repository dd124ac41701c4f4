#include "ettk/harness/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ettk::harness {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

OrderSweepStudy order_sweep_study(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                                  std::span<const double> x0, std::span<const jetflow::ExpandVar> vars,
                                  const uncert::UniformBox& box, const eventmap::EventSpec& spec, double horizon,
                                  std::span<const int> orders, long n_mc, std::uint64_t seed,
                                  const FilterFn& filter, const jetflow::IntegrateOptions& opts) {
  if (orders.empty()) throw std::invalid_argument("order_sweep_study: needs at least one order");
  for (int k : orders)
    if (k < 1) throw std::invalid_argument("order_sweep_study: orders must be >= 1");

  OrderSweepStudy study;
  study.seed = seed;
  study.n_mc = n_mc;
  study.component_labels = model.state_names();

  auto t0 = std::chrono::steady_clock::now();
  const MCResult mc = mc_to_event(model, policy, x0, vars, box, spec, horizon, n_mc, seed, filter, opts);
  study.mc_moments = empirical_moments(mc);
  study.mc_seconds = seconds_since(t0);
  study.mc_hits = mc.hits;

  for (int k : orders) {
    OrderSweepRow row;
    row.order = k;

    t0 = std::chrono::steady_clock::now();
    const eventmap::EventPipelineResult pipe = eventmap::expand_to_event(model, policy, x0, vars, k, spec, horizon, opts);
    row.expand_seconds = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const uncert::MomentSet poly = uncert::propagate_moments(pipe.ett.state_map, box, 2,
                                                             pipe.ett.comp_unit_physical, pipe.ett.comp_labels);
    row.moments_seconds = seconds_since(t0);

    row.cov_frobenius_rel = frobenius_rel_error(poly.covariance, study.mc_moments.covariance);
    for (std::size_t i = 0; i < poly.mean.size(); ++i)
      row.mean_max_abs = std::max(row.mean_max_abs, std::abs(poly.mean[i] - study.mc_moments.mean[i]));
    study.rows.push_back(row);
  }
  return study;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string order_sweep_csv(const OrderSweepStudy& study) {
  std::string out = "order,cov_frobenius_rel,mean_max_abs,mc_samples,mc_hits,seed\n";
  for (const OrderSweepRow& r : study.rows) {
    out += std::to_string(r.order);
    out += ',';
    out += format_full(r.cov_frobenius_rel);
    out += ',';
    out += format_full(r.mean_max_abs);
    out += ',';
    out += std::to_string(study.n_mc);
    out += ',';
    out += std::to_string(study.mc_hits);
    out += ',';
    out += std::to_string(study.seed);
    out += '\n';
  }
  return out;
}

std::string order_sweep_timings_csv(const OrderSweepStudy& study) {
  std::string out = "order,expand_seconds,moments_seconds,mc_seconds\n";
  for (const OrderSweepRow& r : study.rows) {
    out += std::to_string(r.order);
    out += ',';
    out += format_full(r.expand_seconds);
    out += ',';
    out += format_full(r.moments_seconds);
    out += ',';
    out += format_full(study.mc_seconds);
    out += '\n';
  }
  return out;
}

}  // namespace ettk::harness
