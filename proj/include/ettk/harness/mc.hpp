#pragma once
/**
 * @file mc.hpp
 * @brief Monte Carlo baselines: perturbed pointwise integrations to the event.
 *
 * Samples are keyed as (seed, sample index), so any partitioning or ordering
 * of the work reproduces the same draws; statuses are data, not exceptions,
 * because miss rates are part of the analysis. Empirical moments computed
 * here are the reference every polynomial propagation is judged against.
 */

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ettk/eventmap/detect.hpp"
#include "ettk/jetflow/expand.hpp"
#include "ettk/uncert/moments.hpp"

namespace ettk::harness {

enum class SampleStatus { event_hit, event_missed, integration_failed, filtered };
[[nodiscard]] const char* status_name(SampleStatus s);

struct MCSample {
  std::vector<double> delta;  // draw in box variable units
  std::vector<double> state;  // terminal state at the event (internal units); empty unless hit/filtered
  double t_event = 0.0;       // internal units; meaningful for hit/filtered
  SampleStatus status = SampleStatus::event_missed;
};

struct MCResult {
  std::vector<MCSample> samples;  // canonical sample-index order
  std::uint64_t seed = 0;
  long hits = 0;
  long misses = 0;
  long failures = 0;
  long filtered = 0;
  std::vector<std::string> state_labels;
  std::vector<double> state_units;  // physical per internal unit
  std::vector<std::string> var_labels;

  [[nodiscard]] long total() const { return static_cast<long>(samples.size()); }
};

/// Accept/reject hook applied to event-hitting samples (e.g., a gate window
/// at the crossing). Returning false marks the sample filtered; its terminal
/// state stays recorded but is excluded from statistics.
using FilterFn = std::function<bool(const eventmap::EventHit&)>;

/// n independent uniform draws from the box; draw s uses stream (seed, s).
[[nodiscard]] std::vector<std::vector<double>> sample_box(const uncert::UniformBox& box, long n, std::uint64_t seed);

/// Integrate n perturbed initial conditions to the event. Perturbations
/// enter through the same variable definitions the expansions use: state
/// variables shift x0, parameter variables shift the model's SI nominal.
/// The unperturbed trajectory must hit the event (event_miss_error /
/// grazing_error otherwise); per-sample misses and failures become statuses.
[[nodiscard]] MCResult mc_to_event(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                                   std::span<const double> x0, std::span<const jetflow::ExpandVar> vars,
                                   const uncert::UniformBox& box, const eventmap::EventSpec& spec, double horizon,
                                   long n, std::uint64_t seed, const FilterFn& filter = {},
                                   const jetflow::IntegrateOptions& opts = {});

/// Sample mean and unbiased covariance over event-hit samples (components
/// defaults to the full state). Requires at least two hits.
[[nodiscard]] uncert::MomentSet empirical_moments(const MCResult& result, std::span<const int> components = {});

/// Trigger-time sample mean/stddev over event-hit samples (internal units).
struct TriggerStats {
  double mean = 0.0;
  double stddev = 0.0;
  long count = 0;
};
[[nodiscard]] TriggerStats trigger_time_stats(const MCResult& result);

/// || A - B ||_F / || B ||_F over equally shaped row-major matrices.
[[nodiscard]] double frobenius_rel_error(std::span<const double> a, std::span<const double> b);

}  // namespace ettk::harness
