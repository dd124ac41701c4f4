#include "ettk/harness/mc.hpp"

#include <cmath>
#include <stdexcept>

#include "ettk/rng.hpp"

namespace ettk::harness {

const char* status_name(SampleStatus s) {
  switch (s) {
    case SampleStatus::event_hit: return "event-hit";
    case SampleStatus::event_missed: return "event-missed";
    case SampleStatus::integration_failed: return "integration-failed";
    case SampleStatus::filtered: return "filtered";
  }
  return "?";
}

std::vector<std::vector<double>> sample_box(const uncert::UniformBox& box, long n, std::uint64_t seed) {
  box.validate();
  if (n < 1) throw std::invalid_argument("sample_box: n must be >= 1");
  std::vector<std::vector<double>> draws;
  draws.reserve(static_cast<std::size_t>(n));
  const std::size_t dim = static_cast<std::size_t>(box.dim());
  for (long s = 0; s < n; ++s) {
    CounterRng rng(seed, static_cast<std::uint64_t>(s));
    std::vector<double> d(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = rng.uniform(box.lo[i], box.hi[i]);
    draws.push_back(std::move(d));
  }
  return draws;
}

MCResult mc_to_event(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                     std::span<const double> x0, std::span<const jetflow::ExpandVar> vars,
                     const uncert::UniformBox& box, const eventmap::EventSpec& spec, double horizon, long n,
                     std::uint64_t seed, const FilterFn& filter, const jetflow::IntegrateOptions& opts) {
  if (static_cast<int>(vars.size()) != box.dim())
    throw std::invalid_argument("mc_to_event: box dimension mismatches expansion variables");
  std::vector<std::string> var_labels = jetflow::expand_var_labels(model, vars);

  // The unperturbed trajectory must reach the manifold; a nominal miss is a
  // setup error, not a statistic.
  (void)eventmap::integrate_to_event_or_throw(model, policy, x0, spec, horizon, opts);

  MCResult result;
  result.seed = seed;
  result.state_labels = model.state_names();
  result.state_units = model.state_scale();
  result.var_labels = std::move(var_labels);
  result.samples.reserve(static_cast<std::size_t>(n));

  const std::vector<std::vector<double>> draws = sample_box(box, n, seed);
  std::vector<double> x(x0.begin(), x0.end());
  for (const std::vector<double>& delta : draws) {
    // Apply the perturbation through the variable definitions.
    x.assign(x0.begin(), x0.end());
    dynamics::ParamJets<double> overrides;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const jetflow::ExpandVar& v = vars[j];
      if (v.kind == jetflow::ExpandVar::Kind::state) {
        x[static_cast<std::size_t>(v.index)] += v.scale * delta[j];
      } else {
        overrides[v.param] = model.param_nominal(v.param) + v.scale * delta[j];
      }
    }

    MCSample sample;
    sample.delta = delta;
    try {
      const eventmap::EventIntegration run = eventmap::integrate_to_event(
          model, policy, x, spec, horizon, opts, overrides.empty() ? nullptr : &overrides);
      if (run.detection.status == eventmap::DetectResult::Status::hit) {
        const eventmap::EventHit& hit = *run.detection.hit;
        sample.state = hit.state;
        sample.t_event = hit.t_star;
        if (filter && !filter(hit)) {
          sample.status = SampleStatus::filtered;
          ++result.filtered;
        } else {
          sample.status = SampleStatus::event_hit;
          ++result.hits;
        }
      } else {
        // Tangential grazes never yield a usable terminal state; they count
        // as misses in the statistics, like the clean misses.
        sample.status = SampleStatus::event_missed;
        ++result.misses;
      }
    } catch (const numerical_error&) {
      sample.status = SampleStatus::integration_failed;
      ++result.failures;
    }
    result.samples.push_back(std::move(sample));
  }
  return result;
}

uncert::MomentSet empirical_moments(const MCResult& result, std::span<const int> components) {
  std::vector<int> all;
  if (components.empty()) {
    all.resize(result.state_labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    components = all;
  }
  const std::size_t dim = components.size();
  for (int c : components)
    if (c < 0 || static_cast<std::size_t>(c) >= result.state_labels.size())
      throw std::invalid_argument("empirical_moments: component index out of range");

  long count = 0;
  std::vector<double> mean(dim, 0.0);
  for (const MCSample& s : result.samples) {
    if (s.status != SampleStatus::event_hit) continue;
    ++count;
    for (std::size_t i = 0; i < dim; ++i) mean[i] += s.state[static_cast<std::size_t>(components[i])];
  }
  if (count < 2) throw std::invalid_argument("empirical_moments: fewer than two event-hit samples");
  for (double& m : mean) m /= static_cast<double>(count);

  std::vector<double> cov(dim * dim, 0.0);
  std::vector<double> centered(dim);
  for (const MCSample& s : result.samples) {
    if (s.status != SampleStatus::event_hit) continue;
    for (std::size_t i = 0; i < dim; ++i) centered[i] = s.state[static_cast<std::size_t>(components[i])] - mean[i];
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) cov[i * dim + j] += centered[i] * centered[j];
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      cov[i * dim + j] /= static_cast<double>(count - 1);
      cov[j * dim + i] = cov[i * dim + j];
    }

  uncert::MomentSet ms;
  ms.mean = std::move(mean);
  ms.covariance = std::move(cov);
  ms.map_order = 0;  // empirical, no expansion involved
  for (int c : components) {
    ms.labels.push_back(result.state_labels[static_cast<std::size_t>(c)]);
    ms.unit_scale.push_back(result.state_units[static_cast<std::size_t>(c)]);
  }
  return ms;
}

TriggerStats trigger_time_stats(const MCResult& result) {
  TriggerStats st;
  double sum = 0.0;
  for (const MCSample& s : result.samples)
    if (s.status == SampleStatus::event_hit) {
      sum += s.t_event;
      ++st.count;
    }
  if (st.count == 0) return st;
  st.mean = sum / static_cast<double>(st.count);
  double ss = 0.0;
  for (const MCSample& s : result.samples)
    if (s.status == SampleStatus::event_hit) ss += (s.t_event - st.mean) * (s.t_event - st.mean);
  st.stddev = (st.count > 1) ? std::sqrt(ss / static_cast<double>(st.count - 1)) : 0.0;
  return st;
}

double frobenius_rel_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("frobenius_rel_error: shape mismatch or empty input");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    ref += b[i] * b[i];
  }
  if (ref == 0.0) throw std::invalid_argument("frobenius_rel_error: zero reference norm");
  return std::sqrt(diff / ref);
}

}  // namespace ettk::harness
