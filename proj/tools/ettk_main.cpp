/**
 * @file ettk_main.cpp
 * @brief Command-line front end for the event transition toolkit.
 *
 * Subcommands cover the full pipeline: expand (Taylor maps to the event),
 * radius (per-state convergence sweeps), moments (uncertainty propagation
 * plus requirement checks), mc (Monte Carlo baseline), compare (order sweep
 * vs. MC), fit-event (mesh-labeled event network training) and simulate
 * (single trajectories). Exit codes: 0 success, 2 configuration error,
 * 3 numerical failure, 4 nominal event miss.
 */

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ettk/eventmap/fit.hpp"
#include "ettk/eventmap/invert.hpp"
#include "ettk/eventmap/mesh.hpp"
#include "ettk/harness/config.hpp"
#include "ettk/harness/study.hpp"
#include "ettk/polyalg/serialize.hpp"
#include "ettk/rng.hpp"
#include "ettk/uncert/radius.hpp"

namespace {

using namespace ettk;
using harness::format_full;
using harness::RunConfig;
using nlohmann::json;

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string map_path;  // radius: sweep a previously exported map
  std::uint64_t seed = 0;
  bool seed_given = false;
  int order = 0;  // 0 = use the config's order
  bool write_samples = false;
};

std::filesystem::path out_file(const CliOptions& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  return std::filesystem::path(opt.out_dir) / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

RunConfig load_config_or_fail(const CliOptions& opt) {
  if (opt.config_path.empty()) throw config_error("this subcommand needs --config <file>");
  RunConfig cfg = harness::load_run_config(opt.config_path);
  if (opt.seed_given) cfg.seed = opt.seed;
  if (opt.order > 0) {
    cfg.order = opt.order;
    cfg.orders.clear();
    for (int k = 1; k <= cfg.order; ++k) cfg.orders.push_back(k);
  }
  return cfg;
}

void require_x0(const RunConfig& cfg) {
  if (cfg.x0.empty()) throw config_error("config: this command needs 'x0'");
  if (cfg.vars.empty()) throw config_error("config: this command needs 'vars'");
}

json vars_meta(const std::vector<std::string>& labels, std::span<const double> units) {
  json arr = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i)
    arr.push_back({{"label", labels[i]}, {"unit_physical", units[i]}});
  return arr;
}

json comps_meta(const std::vector<std::string>& labels, std::span<const double> units) {
  return vars_meta(labels, units);
}

// ---------------------------------------------------------------- expand ---

int run_expand(const CliOptions& opt) {
  RunConfig cfg = load_config_or_fail(opt);
  const auto& model = cfg.require_model();
  require_x0(cfg);
  const netpoly::PolicyNet* policy = cfg.policy ? &*cfg.policy : nullptr;

  if (cfg.event) {
    const eventmap::EventPipelineResult pipe = eventmap::expand_to_event(
        model, policy, cfg.x0, cfg.vars, cfg.order, *cfg.event, cfg.require_horizon(), cfg.integrate);
    const eventmap::EventTransitionMap& ett = pipe.ett;
    polyalg::save_map(ett.state_map, out_file(opt, "ett_map.json").string());
    json meta{{"model", ett.model_name},
              {"order", ett.order},
              {"event", cfg.event->describe()},
              {"t_star_internal", ett.t_star},
              {"t_star_seconds", ett.t_star * model.time_scale()},
              {"e_slope", ett.e_slope},
              {"newton_residual", ett.newton_residual},
              {"vars", vars_meta(ett.state_map.var_labels(), ett.var_unit_physical)},
              {"components", comps_meta(ett.comp_labels, ett.comp_unit_physical)},
              {"trigger_time_unit_seconds", model.time_scale()},
              {"trigger_time_terms", polyalg::poly_terms_to_json(ett.trigger_time)},
              {"map_file", "ett_map.json"}};
    write_json(out_file(opt, "ett_meta.json"), meta);
    std::cout << "event transition map: order " << ett.order << ", crossing at t = "
              << ett.t_star * model.time_scale() << " s, |de/dt| = " << std::abs(ett.e_slope) << "\n";
    return 0;
  }

  if (!(cfg.t_end > 0.0)) throw config_error("expand: configure an 'event' block or run.t_end > 0");
  const jetflow::FlowExpansion flow =
      jetflow::expand_flow(model, policy, cfg.x0, cfg.vars, cfg.order, cfg.t_end, cfg.integrate);
  polyalg::save_map(flow.map, out_file(opt, "flow_map.json").string());
  json meta{{"model", flow.model_name},
            {"order", flow.order},
            {"t_end_internal", flow.t_nom},
            {"t_end_seconds", flow.t_nom * model.time_scale()},
            {"vars", vars_meta(flow.map.var_labels(), flow.var_unit_physical)},
            {"components", comps_meta(flow.comp_labels, flow.comp_unit_physical)},
            {"map_file", "flow_map.json"}};
  write_json(out_file(opt, "flow_meta.json"), meta);
  std::cout << "flow map: order " << flow.order << " at t = " << flow.t_nom * model.time_scale() << " s\n";
  return 0;
}

// ---------------------------------------------------------------- radius ---

std::string radius_csv(const std::vector<uncert::SweepEntry>& sweep) {
  std::string out = "component,component_label,variable,variable_label,order,radius,radius_physical,unbounded\n";
  for (const uncert::SweepEntry& e : sweep) {
    if (e.unbounded) {
      out += std::to_string(e.component) + ',' + e.component_label + ',' + std::to_string(e.variable) + ',' +
             e.variable_label + ",0,inf,inf,1\n";
      continue;
    }
    for (std::size_t i = 0; i < e.scaled.orders.size(); ++i)
      out += std::to_string(e.component) + ',' + e.component_label + ',' + std::to_string(e.variable) + ',' +
             e.variable_label + ',' + std::to_string(e.scaled.orders[i]) + ',' + format_full(e.scaled.values[i]) +
             ',' + format_full(e.physical.values[i]) + ",0\n";
  }
  return out;
}

json radius_json(const std::vector<uncert::SweepEntry>& sweep) {
  json rows = json::array();
  for (const uncert::SweepEntry& e : sweep) {
    json r{{"component", e.component},
           {"component_label", e.component_label},
           {"variable", e.variable},
           {"variable_label", e.variable_label},
           {"unbounded", e.unbounded},
           {"orders", e.scaled.orders},
           {"radius", e.scaled.values},
           {"radius_physical", e.physical.values}};
    rows.push_back(std::move(r));
  }
  return rows;
}

int run_radius(const CliOptions& opt) {
  std::vector<uncert::SweepEntry> sweep;
  if (!opt.map_path.empty()) {
    const polyalg::TaylorMap map = polyalg::load_map(opt.map_path);
    sweep = uncert::per_state_radius_sweep(map, opt.order > 0 ? opt.order : map.order());
  } else {
    RunConfig cfg = load_config_or_fail(opt);
    const auto& model = cfg.require_model();
    require_x0(cfg);
    const netpoly::PolicyNet* policy = cfg.policy ? &*cfg.policy : nullptr;
    const eventmap::EventPipelineResult pipe = eventmap::expand_to_event(
        model, policy, cfg.x0, cfg.vars, cfg.order, cfg.require_event(), cfg.require_horizon(), cfg.integrate);
    sweep = uncert::per_state_radius_sweep(pipe.ett.state_map, cfg.order, pipe.ett.var_unit_physical,
                                           pipe.ett.comp_labels);
  }
  if (opt.format == "json")
    write_json(out_file(opt, "radius.json"), radius_json(sweep));
  else
    write_text(out_file(opt, "radius.csv"), radius_csv(sweep));

  // Headline: the tightest physical radius per variable across components.
  std::map<std::string, double> tightest;
  for (const uncert::SweepEntry& e : sweep) {
    const double r = e.physical_headline();
    auto [it, fresh] = tightest.emplace(e.variable_label, r);
    if (!fresh) it->second = std::min(it->second, r);
  }
  for (const auto& [label, r] : tightest) std::cout << label << ": " << r << " (physical)\n";
  return 0;
}

// --------------------------------------------------------------- moments ---

json moments_json(const uncert::MomentSet& ms) {
  json j{{"labels", ms.labels},
         {"map_order", ms.map_order},
         {"mean", ms.mean},
         {"mean_physical", ms.mean_physical()},
         {"covariance", ms.covariance},
         {"covariance_physical", ms.covariance_physical()},
         {"unit_scale", ms.unit_scale},
         {"variance_clamped", ms.variance_clamped},
         {"radius_warning", ms.radius_warning}};
  if (!ms.central.empty()) {
    j["central_order"] = ms.central_order;
    j["central"] = ms.central;
  }
  return j;
}

std::string moments_csv(const uncert::MomentSet& ms) {
  std::string out = "quantity,row,col,row_label,col_label,value_internal,value_physical\n";
  const auto mp = ms.mean_physical();
  const auto cp = ms.covariance_physical();
  const std::size_t n = ms.mean.size();
  auto label = [&](std::size_t i) { return i < ms.labels.size() ? ms.labels[i] : std::to_string(i); };
  for (std::size_t i = 0; i < n; ++i)
    out += "mean," + std::to_string(i) + ",," + label(i) + ",," + format_full(ms.mean[i]) + ',' +
           format_full(mp[i]) + '\n';
  for (std::size_t i = 0; i < n && !ms.covariance.empty(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      out += "cov," + std::to_string(i) + ',' + std::to_string(j) + ',' + label(i) + ',' + label(j) + ',' +
             format_full(ms.covariance[i * n + j]) + ',' + format_full(cp[i * n + j]) + '\n';
  return out;
}

int run_moments(const CliOptions& opt) {
  RunConfig cfg = load_config_or_fail(opt);
  const auto& model = cfg.require_model();
  require_x0(cfg);
  const netpoly::PolicyNet* policy = cfg.policy ? &*cfg.policy : nullptr;
  const eventmap::EventPipelineResult pipe = eventmap::expand_to_event(
      model, policy, cfg.x0, cfg.vars, cfg.order, cfg.require_event(), cfg.require_horizon(), cfg.integrate);
  const eventmap::EventTransitionMap& ett = pipe.ett;

  const uncert::MomentSet ms =
      uncert::propagate_moments(ett.state_map, cfg.box, cfg.central, ett.comp_unit_physical, ett.comp_labels);

  // Trigger-time dispersion from the same expansion, same box.
  polyalg::TaylorMap tmap({ett.trigger_time}, ett.state_map.var_labels());
  const uncert::MomentSet tms = uncert::propagate_moments(tmap, cfg.box, 2);
  const double tsec = model.time_scale();

  json j = moments_json(ms);
  j["t_star_seconds"] = ett.t_star * tsec;
  j["trigger_time"] = {{"mean_seconds", (ett.t_star + tms.mean[0]) * tsec},
                       {"stddev_seconds", std::sqrt(std::max(0.0, tms.cov(0, 0))) * tsec}};
  if (ms.radius_warning)
    std::cerr << "warning: the uncertainty box exceeds a per-variable radius estimate; moments describe the "
                 "polynomial, not necessarily the flow\n";

  if (cfg.requirement) {
    const uncert::RequirementResult rr =
        uncert::requirement_check(ms, cfg.requirement->components, cfg.requirement->predicate,
                                  cfg.requirement->n, cfg.seed);
    j["requirement"] = {{"fraction", rr.fraction},
                       {"std_error", rr.std_error},
                       {"satisfied", rr.satisfied},
                       {"n_samples", rr.n_samples},
                       {"seed", rr.seed},
                       {"gaussian_assumption", rr.gaussian_assumption}};
    std::cout << "requirement satisfied by " << rr.fraction * 100.0 << "% +- " << rr.std_error * 100.0
              << "% of Gaussian samples\n";
  }

  write_json(out_file(opt, "moments.json"), j);
  if (opt.format == "csv") write_text(out_file(opt, "moments.csv"), moments_csv(ms));
  std::cout << "moments at order " << cfg.order << " written (radius warning: "
            << (ms.radius_warning ? "yes" : "no") << ")\n";
  return 0;
}

// -------------------------------------------------------------------- mc ---

std::string mc_samples_csv(const harness::MCResult& mc) {
  std::string out = "index,status,t_event";
  for (const auto& l : mc.var_labels) out += ',' + l;
  for (const auto& l : mc.state_labels) out += ',' + l;
  out += '\n';
  for (std::size_t s = 0; s < mc.samples.size(); ++s) {
    const harness::MCSample& smp = mc.samples[s];
    out += std::to_string(s);
    out += ',';
    out += harness::status_name(smp.status);
    out += ',';
    const bool has_state = !smp.state.empty();
    out += has_state ? format_full(smp.t_event) : std::string();
    for (std::size_t i = 0; i < mc.var_labels.size(); ++i) out += ',' + format_full(smp.delta[i]);
    for (std::size_t i = 0; i < mc.state_labels.size(); ++i)
      out += ',' + (has_state ? format_full(smp.state[i]) : std::string());
    out += '\n';
  }
  return out;
}

int run_mc(const CliOptions& opt) {
  RunConfig cfg = load_config_or_fail(opt);
  const auto& model = cfg.require_model();
  require_x0(cfg);
  const netpoly::PolicyNet* policy = cfg.policy ? &*cfg.policy : nullptr;

  const harness::MCResult mc =
      harness::mc_to_event(model, policy, cfg.x0, cfg.vars, cfg.box, cfg.require_event(), cfg.require_horizon(),
                           cfg.n, cfg.seed, cfg.make_filter(), cfg.integrate);
  json summary{{"n", mc.total()},
               {"seed", mc.seed},
               {"hits", mc.hits},
               {"misses", mc.misses},
               {"failures", mc.failures},
               {"filtered", mc.filtered}};
  if (mc.hits >= 2) {
    const uncert::MomentSet ms = harness::empirical_moments(mc);
    const harness::TriggerStats ts = harness::trigger_time_stats(mc);
    summary["moments"] = moments_json(ms);
    summary["trigger_time"] = {{"mean_seconds", ts.mean * model.time_scale()},
                               {"stddev_seconds", ts.stddev * model.time_scale()},
                               {"count", ts.count}};
    if (opt.format == "csv") write_text(out_file(opt, "mc_moments.csv"), moments_csv(ms));
  }
  write_json(out_file(opt, "mc_summary.json"), summary);
  if (opt.write_samples) write_text(out_file(opt, "mc_samples.csv"), mc_samples_csv(mc));
  std::cout << "mc: " << mc.hits << " hits, " << mc.misses << " misses, " << mc.failures << " failures, "
            << mc.filtered << " filtered of " << mc.total() << "\n";
  return 0;
}

// --------------------------------------------------------------- compare ---

int run_compare(const CliOptions& opt) {
  RunConfig cfg = load_config_or_fail(opt);
  const auto& model = cfg.require_model();
  require_x0(cfg);
  const netpoly::PolicyNet* policy = cfg.policy ? &*cfg.policy : nullptr;

  const harness::OrderSweepStudy study =
      harness::order_sweep_study(model, policy, cfg.x0, cfg.vars, cfg.box, cfg.require_event(),
                                 cfg.require_horizon(), cfg.orders, cfg.n, cfg.seed, cfg.make_filter(),
                                 cfg.integrate);
  write_text(out_file(opt, "compare.csv"), harness::order_sweep_csv(study));
  write_text(out_file(opt, "compare_timings.csv"), harness::order_sweep_timings_csv(study));
  if (opt.format == "json") {
    json rows = json::array();
    for (const harness::OrderSweepRow& r : study.rows)
      rows.push_back({{"order", r.order},
                      {"cov_frobenius_rel", r.cov_frobenius_rel},
                      {"mean_max_abs", r.mean_max_abs}});
    write_json(out_file(opt, "compare.json"),
               json{{"rows", rows}, {"n_mc", study.n_mc}, {"mc_hits", study.mc_hits}, {"seed", study.seed}});
  }
  for (const harness::OrderSweepRow& r : study.rows)
    std::cout << "order " << r.order << ": covariance error " << r.cov_frobenius_rel << "\n";
  return 0;
}

// ------------------------------------------------------------- fit-event ---

int run_fit_event(const CliOptions& opt) {
  RunConfig cfg = load_config_or_fail(opt);
  if (!cfg.fit) throw config_error("config: fit-event needs a 'fit' block");
  const RunConfig::Fit& fit = *cfg.fit;

  const eventmap::TriangleMesh mesh = eventmap::load_mesh(fit.mesh_path);
  eventmap::validate_watertight(mesh);

  std::array<double, 3> lo{1e300, 1e300, 1e300};
  std::array<double, 3> hi{-1e300, -1e300, -1e300};
  for (const auto& v : mesh.vertices)
    for (int d = 0; d < 3; ++d) {
      lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], v[static_cast<std::size_t>(d)]);
      hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], v[static_cast<std::size_t>(d)]);
    }
  double diag = 0.0;
  for (int d = 0; d < 3; ++d) diag += (hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)]) *
                                      (hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)]);
  const double pad = fit.padding * std::sqrt(diag);

  std::vector<std::array<double, 3>> points(static_cast<std::size_t>(fit.n));
  std::vector<double> labels(static_cast<std::size_t>(fit.n));
  for (long s = 0; s < fit.n; ++s) {
    CounterRng rng(fit.options.seed, static_cast<std::uint64_t>(s));
    std::array<double, 3> p{};
    for (int d = 0; d < 3; ++d)
      p[static_cast<std::size_t>(d)] =
          rng.uniform(lo[static_cast<std::size_t>(d)] - pad, hi[static_cast<std::size_t>(d)] + pad);
    points[static_cast<std::size_t>(s)] = p;
    labels[static_cast<std::size_t>(s)] = eventmap::signed_boundary_value(mesh, p, fit.offset);
  }

  const eventmap::FitResult result = eventmap::fit_event_net(points, labels, fit.options);
  netpoly::save_policy(result.net, out_file(opt, "event_net.json").string());
  write_json(out_file(opt, "fit_report.json"),
             json{{"mesh", fit.mesh_path},
                  {"vertices", mesh.vertex_count()},
                  {"triangles", mesh.triangle_count()},
                  {"offset", fit.offset},
                  {"n_points", fit.n},
                  {"seed", fit.options.seed},
                  {"param_count", result.param_count},
                  {"train_mse", result.train_mse},
                  {"holdout_mse", result.holdout_mse},
                  {"holdout_rmse", result.holdout_rmse}});
  std::cout << "fitted event net (" << result.param_count << " parameters): holdout RMSE " << result.holdout_rmse
            << "\n";
  return 0;
}

// -------------------------------------------------------------- simulate ---

int run_simulate(const CliOptions& opt) {
  RunConfig cfg = load_config_or_fail(opt);
  const auto& model = cfg.require_model();
  if (cfg.x0.empty()) throw config_error("config: simulate needs 'x0'");
  const netpoly::PolicyNet* policy = cfg.policy ? &*cfg.policy : nullptr;

  std::string csv = "t_seconds";
  for (const auto& name : model.state_names()) csv += ',' + name;
  if (cfg.event) csv += ",event_value";
  csv += '\n';
  auto emit = [&](double t, std::span<const double> x) {
    csv += format_full(t * model.time_scale());
    for (std::size_t i = 0; i < x.size(); ++i) csv += ',' + format_full(x[i] * model.state_scale()[i]);
    if (cfg.event) csv += ',' + format_full(eventmap::event_value<double>(*cfg.event, x));
    csv += '\n';
  };

  if (cfg.event) {
    const eventmap::EventIntegration run = eventmap::integrate_to_event_or_throw(
        model, policy, cfg.x0, *cfg.event, cfg.require_horizon(), cfg.integrate);
    const jetflow::Trajectory& traj = run.trajectory;
    const eventmap::EventHit& hit = *run.detection.hit;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      if (traj.times[i] > hit.t_star) break;
      emit(traj.times[i], traj.states[i]);
    }
    emit(hit.t_star, hit.state);
    write_text(out_file(opt, "trajectory.csv"), csv);
    std::cout << "event reached at t = " << hit.t_star * model.time_scale() << " s\n";
    return 0;
  }

  if (!(cfg.t_end > 0.0)) throw config_error("simulate: configure an 'event' block or run.t_end > 0");
  const jetflow::Trajectory traj = jetflow::integrate(model, policy, cfg.x0, cfg.t_end, cfg.integrate);
  for (std::size_t i = 0; i < traj.times.size(); ++i) emit(traj.times[i], traj.states[i]);
  write_text(out_file(opt, "trajectory.csv"), csv);
  std::cout << "integrated to t = " << traj.t_final() * model.time_scale() << " s in "
            << traj.stats.steps_accepted << " steps\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial event transition toolkit for neural-feedback dynamical systems"};
  app.require_subcommand(1);
  app.fallthrough();

  CliOptions opt;
  auto* seed_opt = app.add_option("--seed", opt.seed, "Override the config's RNG seed");
  app.add_option("--order", opt.order, "Override the config's expansion order")->check(CLI::PositiveNumber);
  app.add_option("--config", opt.config_path, "Run configuration (JSON)");
  app.add_option("--out", opt.out_dir, "Output directory (default: current)");
  app.add_option("--format", opt.format, "Table format")->check(CLI::IsMember({"csv", "json"}));

  auto* cmd_expand = app.add_subcommand("expand", "Build the event transition (or fixed-time flow) map");
  auto* cmd_radius = app.add_subcommand("radius", "Per-state convergence-radius sweep");
  cmd_radius->add_option("--map", opt.map_path, "Sweep a previously exported map JSON instead of expanding");
  auto* cmd_moments = app.add_subcommand("moments", "Propagate the uncertainty box to event-state moments");
  auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo baseline to the event");
  cmd_mc->add_flag("--samples", opt.write_samples, "Also write the per-sample table");
  auto* cmd_compare = app.add_subcommand("compare", "Moment propagation vs. MC across orders");
  auto* cmd_fit = app.add_subcommand("fit-event", "Fit an event network to mesh-derived signed values");
  auto* cmd_sim = app.add_subcommand("simulate", "Integrate one trajectory and write it as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }
  opt.seed_given = seed_opt->count() > 0;

  try {
    if (cmd_expand->parsed()) return run_expand(opt);
    if (cmd_radius->parsed()) return run_radius(opt);
    if (cmd_moments->parsed()) return run_moments(opt);
    if (cmd_mc->parsed()) return run_mc(opt);
    if (cmd_compare->parsed()) return run_compare(opt);
    if (cmd_fit->parsed()) return run_fit_event(opt);
    if (cmd_sim->parsed()) return run_simulate(opt);
  } catch (const event_miss_error& e) {
    std::cerr << "error (event miss): " << e.what() << "\n";
    return 4;
  } catch (const numerical_error& e) {
    std::cerr << "error (numerical): " << e.what() << "\n";
    return 3;
  } catch (const config_error& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
