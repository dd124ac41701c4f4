#pragma once
/**
 * @file study.hpp
 * @brief Order-sweep comparison of polynomial moment propagation against a
 * Monte Carlo baseline.
 *
 * One fixed-seed MC run anchors the study; the event transition map is then
 * rebuilt at each requested order and its propagated covariance compared by
 * relative Frobenius error. Result tables are deterministic for a given
 * (config, seed); wall-clock timings go to a separate sidecar so the main
 * table stays byte-reproducible.
 */

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ettk/eventmap/invert.hpp"
#include "ettk/harness/mc.hpp"

namespace ettk::harness {

struct OrderSweepRow {
  int order = 0;
  double cov_frobenius_rel = 0.0;  // vs. MC covariance
  double mean_max_abs = 0.0;       // max |mean_poly - mean_mc| over components (internal units)
  double expand_seconds = 0.0;     // jet transport + inversion
  double moments_seconds = 0.0;
};

struct OrderSweepStudy {
  std::vector<OrderSweepRow> rows;
  uncert::MomentSet mc_moments;
  long n_mc = 0;
  long mc_hits = 0;
  std::uint64_t seed = 0;
  double mc_seconds = 0.0;
  std::vector<std::string> component_labels;
};

/// Run the study: one MC baseline, then ETT + moment propagation per order.
[[nodiscard]] OrderSweepStudy order_sweep_study(const dynamics::DynamicsModel& model,
                                                const netpoly::PolicyNet* policy, std::span<const double> x0,
                                                std::span<const jetflow::ExpandVar> vars,
                                                const uncert::UniformBox& box, const eventmap::EventSpec& spec,
                                                double horizon, std::span<const int> orders, long n_mc,
                                                std::uint64_t seed, const FilterFn& filter = {},
                                                const jetflow::IntegrateOptions& opts = {});

/// Deterministic result table (no timings): order, covariance error, mean
/// error, MC sample counts.
[[nodiscard]] std::string order_sweep_csv(const OrderSweepStudy& study);

/// Wall-clock sidecar, intentionally separate from the reproducible table.
[[nodiscard]] std::string order_sweep_timings_csv(const OrderSweepStudy& study);

/// Format a double with enough digits to round-trip exactly (reproducible
/// table cells).
[[nodiscard]] std::string format_full(double v);

}  // namespace ettk::harness
