#pragma once
/**
 * @file config.hpp
 * @brief JSON run configuration for the command-line front end.
 *
 * A config file describes one analysis: the model (with SI parameter
 * overrides), an optional policy, the nominal initial state, the perturbation
 * variables with their physical half-widths, the event manifold, and run
 * options. All user-facing quantities are SI; parsing converts into each
 * model's internal units, so perturbation variables come out normalized
 * (U[-1,1] spans the stated physical half-width) unless an explicit box
 * overrides that.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ettk/eventmap/event_spec.hpp"
#include "ettk/eventmap/fit.hpp"
#include "ettk/harness/mc.hpp"
#include "ettk/uncert/requirement.hpp"

namespace ettk::harness {

struct RunConfig {
  std::optional<dynamics::DynamicsModel> model;
  std::optional<netpoly::PolicyNet> policy;
  std::vector<double> x0;  // internal units
  std::vector<jetflow::ExpandVar> vars;
  uncert::UniformBox box;  // normalized variable units
  std::optional<eventmap::EventSpec> event;

  int order = 3;
  int central = 2;          // highest moment order propagated (2 = covariance)
  std::vector<int> orders;  // compare subcommand; defaults to 1..order
  double horizon = 0.0;     // internal time units; 0 = not set
  double t_end = 0.0;       // internal time units; 0 = not set
  long n = 10000;
  std::uint64_t seed = 1;
  jetflow::IntegrateOptions integrate;

  struct Requirement {
    std::vector<int> components;
    uncert::Predicate predicate;
    long n = 100000;
  };
  std::optional<Requirement> requirement;

  /// Accept window on the physical terminal state at the crossing; samples
  /// outside become status "filtered".
  struct StateFilter {
    std::vector<int> components;
    std::vector<double> lo;  // physical units
    std::vector<double> hi;
  };
  std::optional<StateFilter> filter;

  struct Fit {
    std::string mesh_path;
    double offset = 0.0;   // h in the signed boundary value, SI
    long n = 20000;
    double padding = 0.25; // sampling-box inflation, fraction of the bound diagonal
    eventmap::FitOptions options;
  };
  std::optional<Fit> fit;

  [[nodiscard]] const dynamics::DynamicsModel& require_model() const;
  [[nodiscard]] const eventmap::EventSpec& require_event() const;
  [[nodiscard]] double require_horizon() const;
  [[nodiscard]] FilterFn make_filter() const;
};

/// Parse a config file (all errors surface as config_error). Relative paths
/// inside the file resolve against the file's directory.
[[nodiscard]] RunConfig load_run_config(const std::string& path);

[[nodiscard]] RunConfig parse_run_config(const nlohmann::json& j, const std::string& base_dir);

}  // namespace ettk::harness
