#include "ettk/harness/config.hpp"

#include <filesystem>
#include <fstream>
#include <map>

namespace ettk::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw config_error("config: " + msg); }

std::string resolve_path(const std::string& base_dir, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || base_dir.empty()) return p;
  return (std::filesystem::path(base_dir) / path).string();
}

/// Apply numeric overrides from `obj` to named struct fields; unknown keys
/// are configuration typos and rejected outright.
void read_fields(const json& obj, const std::map<std::string, double*>& fields, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) fail(where + ": unknown field '" + key + "'");
    if (!value.is_number()) fail(where + "." + key + " must be a number");
    *it->second = value.get<double>();
  }
}

dynamics::DynamicsModel parse_model(const json& j) {
  if (!j.contains("model")) fail("missing 'model' block");
  const json& m = j.at("model");
  const std::string kind = m.value("kind", "");
  const json params = m.value("params", json::object());
  if (kind == "transfer") {
    dynamics::TransferParams p;
    read_fields(params,
                {{"mu_sun", &p.mu_sun},
                 {"orbit_radius", &p.orbit_radius},
                 {"thrust_accel", &p.thrust_accel},
                 {"soi_radius", &p.soi_radius}},
                "model.params");
    return dynamics::DynamicsModel::transfer(p);
  }
  if (kind == "lander") {
    dynamics::LanderParams p;
    read_fields(params,
                {{"mu", &p.mu},
                 {"spin_rate", &p.spin_rate},
                 {"thrust_max", &p.thrust_max},
                 {"isp", &p.isp},
                 {"g0", &p.g0},
                 {"mass_ref", &p.mass_ref},
                 {"length_ref", &p.length_ref}},
                "model.params");
    return dynamics::DynamicsModel::lander(p);
  }
  if (kind == "drone") {
    dynamics::DroneParams p;
    read_fields(params,
                {{"mass", &p.mass},          {"inertia_x", &p.inertia_x}, {"inertia_y", &p.inertia_y},
                 {"inertia_z", &p.inertia_z},{"gravity", &p.gravity},     {"k_omega", &p.k_omega},
                 {"k_x", &p.k_x},            {"k_y", &p.k_y},             {"k_z", &p.k_z},
                 {"k_h", &p.k_h},            {"k_p", &p.k_p},             {"k_q", &p.k_q},
                 {"k_pv", &p.k_pv},          {"k_qv", &p.k_qv},           {"k_r1", &p.k_r1},
                 {"k_r2", &p.k_r2},          {"k_rr", &p.k_rr},           {"rotor_tau", &p.rotor_tau},
                 {"omega_min", &p.omega_min},{"omega_max", &p.omega_max}},
                "model.params");
    return dynamics::DynamicsModel::drone(p);
  }
  fail("model.kind must be one of transfer|lander|drone (got '" + kind + "')");
}

int state_index(const dynamics::DynamicsModel& model, const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    const int idx = v.get<int>();
    if (idx < 0 || idx >= model.state_dim()) fail(where + ": state index out of range");
    return idx;
  }
  if (v.is_string()) {
    const auto& names = model.state_names();
    const std::string name = v.get<std::string>();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    fail(where + ": unknown state '" + name + "'");
  }
  fail(where + ": state reference must be a name or an index");
}

std::vector<jetflow::ExpandVar> parse_vars(const dynamics::DynamicsModel& model, const json& j) {
  std::vector<jetflow::ExpandVar> vars;
  if (!j.contains("vars")) return vars;
  const json& arr = j.at("vars");
  if (!arr.is_array()) fail("'vars' must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& v = arr[i];
    const std::string where = "vars[" + std::to_string(i) + "]";
    if (!v.is_object()) fail(where + " must be an object");
    if (!v.contains("half_width")) fail(where + ": missing 'half_width' (physical units)");
    const double hw = v.at("half_width").get<double>();
    if (!(hw > 0.0) || !std::isfinite(hw)) fail(where + ": half_width must be positive and finite");
    if (v.contains("state") == v.contains("param")) fail(where + ": exactly one of 'state'/'param' required");
    if (v.contains("state")) {
      const int idx = state_index(model, v.at("state"), where);
      vars.push_back(jetflow::ExpandVar::state(idx, hw / model.state_scale()[static_cast<std::size_t>(idx)]));
    } else {
      vars.push_back(jetflow::ExpandVar::parameter(v.at("param").get<std::string>(), hw));
    }
  }
  return vars;
}

eventmap::EventSpec::Direction parse_direction(const json& e) {
  const std::string d = e.value("direction", "any");
  if (d == "any") return eventmap::EventSpec::Direction::any;
  if (d == "rising") return eventmap::EventSpec::Direction::rising;
  if (d == "falling") return eventmap::EventSpec::Direction::falling;
  fail("event.direction must be any|rising|falling");
}

eventmap::EventSpec parse_event(const dynamics::DynamicsModel& model, const json& e, const std::string& base_dir) {
  if (!e.is_object()) fail("'event' must be an object");
  const std::string kind = e.value("kind", "");
  const auto& scale = model.state_scale();
  eventmap::EventSpec spec;
  if (kind == "sphere") {
    if (!e.contains("center") || !e.contains("radius")) fail("event sphere needs 'center' and 'radius'");
    const auto c = e.at("center").get<std::vector<double>>();
    if (c.size() != 3) fail("event.center must have 3 entries");
    if (model.state_dim() < 3) fail("sphere event needs at least 3 state components");
    if (scale[0] != scale[1] || scale[0] != scale[2])
      fail("sphere event requires a shared unit across components 0..2");
    spec = eventmap::EventSpec::sphere({c[0] / scale[0], c[1] / scale[1], c[2] / scale[2]},
                                       e.at("radius").get<double>() / scale[0], parse_direction(e));
  } else if (kind == "plane") {
    if (!e.contains("normal")) fail("event plane needs 'normal'");
    auto n = e.at("normal").get<std::vector<double>>();
    if (n.empty() || n.size() > static_cast<std::size_t>(model.state_dim()))
      fail("event.normal length must be in [1, state dimension]");
    for (std::size_t i = 0; i < n.size(); ++i) n[i] *= scale[i];  // SI normal onto internal state
    spec = eventmap::EventSpec::plane(std::move(n), e.value("offset", 0.0), parse_direction(e));
  } else if (kind == "neural") {
    if (!e.contains("net")) fail("event neural needs 'net' (weight file path)");
    netpoly::PolicyNet net = netpoly::load_policy(resolve_path(base_dir, e.at("net").get<std::string>()));
    std::vector<int> features;
    if (e.contains("features"))
      for (const json& f : e.at("features")) features.push_back(state_index(model, f, "event.features"));
    else
      for (int i = 0; i < net.input_dim; ++i) features.push_back(i);
    std::vector<double> feature_scale;
    feature_scale.reserve(features.size());
    for (int f : features) feature_scale.push_back(scale[static_cast<std::size_t>(f)]);
    spec = eventmap::EventSpec::neural(std::move(net), std::move(features), std::move(feature_scale),
                                       parse_direction(e));
  } else {
    fail("event.kind must be one of sphere|plane|neural (got '" + kind + "')");
  }
  if (e.contains("refine_tol")) spec.refine_tol = e.at("refine_tol").get<double>();
  if (e.contains("transversality_tol")) spec.transversality_tol = e.at("transversality_tol").get<double>();
  if (e.contains("graze_tol")) spec.graze_tol = e.at("graze_tol").get<double>();
  spec.validate(model.state_dim());
  return spec;
}

std::vector<int> parse_components(const dynamics::DynamicsModel& model, const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) fail(where + " must be a nonempty array");
  std::vector<int> out;
  for (const json& c : arr) out.push_back(state_index(model, c, where));
  return out;
}

}  // namespace

const dynamics::DynamicsModel& RunConfig::require_model() const {
  if (!model) throw config_error("config: no model configured");
  return *model;
}

const eventmap::EventSpec& RunConfig::require_event() const {
  if (!event) throw config_error("config: this command needs an 'event' block");
  return *event;
}

double RunConfig::require_horizon() const {
  if (!(horizon > 0.0)) throw config_error("config: this command needs run.horizon > 0");
  return horizon;
}

FilterFn RunConfig::make_filter() const {
  if (!filter) return {};
  const StateFilter f = *filter;
  const std::vector<double> scale = require_model().state_scale();
  return [f, scale](const eventmap::EventHit& hit) {
    for (std::size_t i = 0; i < f.components.size(); ++i) {
      const std::size_t c = static_cast<std::size_t>(f.components[i]);
      const double physical = hit.state[c] * scale[c];
      if (physical < f.lo[i] || physical > f.hi[i]) return false;
    }
    return true;
  };
}

RunConfig parse_run_config(const nlohmann::json& j, const std::string& base_dir) {
  try {
    RunConfig cfg;
    cfg.model = parse_model(j);
    const dynamics::DynamicsModel& model = *cfg.model;

    if (j.contains("policy")) {
      cfg.policy = netpoly::load_policy(resolve_path(base_dir, j.at("policy").get<std::string>()));
      model.validate_policy_pairing(&*cfg.policy);
    }

    if (j.contains("x0")) {
      cfg.x0 = j.at("x0").get<std::vector<double>>();
      if (static_cast<int>(cfg.x0.size()) != model.state_dim())
        fail("x0 must have " + std::to_string(model.state_dim()) + " entries");
      for (std::size_t i = 0; i < cfg.x0.size(); ++i) cfg.x0[i] /= model.state_scale()[i];
    }

    cfg.vars = parse_vars(model, j);
    if (!cfg.vars.empty()) {
      const std::size_t m = cfg.vars.size();
      cfg.box.lo.assign(m, -1.0);
      cfg.box.hi.assign(m, 1.0);
      if (j.contains("box")) {
        const json& b = j.at("box");
        cfg.box.lo = b.at("lo").get<std::vector<double>>();
        cfg.box.hi = b.at("hi").get<std::vector<double>>();
        if (cfg.box.lo.size() != m || cfg.box.hi.size() != m) fail("box lo/hi must match the number of vars");
      }
      cfg.box.labels = jetflow::expand_var_labels(model, cfg.vars);
      cfg.box.validate();
    }

    if (j.contains("event")) cfg.event = parse_event(model, j.at("event"), base_dir);

    const json run = j.value("run", json::object());
    cfg.order = run.value("order", 3);
    if (cfg.order < 1) fail("run.order must be >= 1");
    cfg.central = run.value("central_moments", 2);
    if (cfg.central < 1) fail("run.central_moments must be >= 1");
    if (run.contains("orders")) {
      cfg.orders = run.at("orders").get<std::vector<int>>();
    } else {
      for (int k = 1; k <= cfg.order; ++k) cfg.orders.push_back(k);
    }
    cfg.horizon = run.value("horizon", 0.0) / model.time_scale();
    cfg.t_end = run.value("t_end", 0.0) / model.time_scale();
    cfg.n = run.value("n", 10000L);
    cfg.seed = run.value("seed", std::uint64_t{1});
    cfg.integrate.rtol = run.value("rtol", cfg.integrate.rtol);
    cfg.integrate.atol = run.value("atol", cfg.integrate.atol);
    cfg.integrate.max_steps = run.value("max_steps", cfg.integrate.max_steps);

    if (j.contains("requirement")) {
      const json& r = j.at("requirement");
      RunConfig::Requirement req;
      req.components = parse_components(model, r.at("components"), "requirement.components");
      if (r.contains("norm_bound")) {
        req.predicate = uncert::NormPredicate{r.at("norm_bound").get<double>()};
      } else if (r.contains("lo") && r.contains("hi")) {
        uncert::BoxPredicate box;
        box.lo = r.at("lo").get<std::vector<double>>();
        box.hi = r.at("hi").get<std::vector<double>>();
        if (box.lo.size() != req.components.size() || box.hi.size() != req.components.size())
          fail("requirement lo/hi must match components");
        req.predicate = std::move(box);
      } else {
        fail("requirement needs 'norm_bound' or 'lo'/'hi'");
      }
      req.n = r.value("n", 100000L);
      cfg.requirement = std::move(req);
    }

    if (j.contains("filter")) {
      const json& f = j.at("filter");
      RunConfig::StateFilter sf;
      sf.components = parse_components(model, f.at("components"), "filter.components");
      sf.lo = f.at("lo").get<std::vector<double>>();
      sf.hi = f.at("hi").get<std::vector<double>>();
      if (sf.lo.size() != sf.components.size() || sf.hi.size() != sf.components.size())
        fail("filter lo/hi must match components");
      cfg.filter = std::move(sf);
    }

    if (j.contains("fit")) {
      const json& f = j.at("fit");
      RunConfig::Fit fit;
      fit.mesh_path = resolve_path(base_dir, f.at("mesh").get<std::string>());
      fit.offset = f.value("offset", 0.0);
      fit.n = f.value("n", 20000L);
      fit.padding = f.value("padding", 0.25);
      if (f.contains("hidden")) fit.options.hidden = f.at("hidden").get<std::vector<int>>();
      fit.options.w0 = f.value("w0", fit.options.w0);
      fit.options.iterations = f.value("iterations", fit.options.iterations);
      fit.options.learning_rate = f.value("learning_rate", fit.options.learning_rate);
      fit.options.holdout_fraction = f.value("holdout_fraction", fit.options.holdout_fraction);
      fit.options.seed = f.value("seed", cfg.seed);
      cfg.fit = std::move(fit);
    }

    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config: parse failure in '" + path + "': " + e.what());
  }
  return parse_run_config(j, std::filesystem::path(path).parent_path().string());
}

}  // namespace ettk::harness
