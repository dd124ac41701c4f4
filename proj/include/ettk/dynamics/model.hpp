#pragma once
/**
 * @file model.hpp
 * @brief Uniform handle over benchmark and user-registered dynamical systems.
 *
 * A DynamicsModel bundles state metadata (names, physical-per-internal unit
 * scales, time scale) with an algebra-generic closed-loop right-hand side.
 * Integrators ask for a prepared functor once per run: parameter jets and
 * derived constants are folded at that point, not per evaluation.
 */

#include <algorithm>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ettk/dynamics/benchmarks.hpp"
#include "ettk/polyalg/tpoly.hpp"

namespace ettk::dynamics {

template <class T>
using RhsFn = std::function<void(std::span<const T>, std::span<T>)>;

/// A user-registered system: fixed scalar and jet paths, no policy, no
/// parameter jets. Used for trivial test systems and custom benchmarks.
struct CustomModel {
  std::string name;
  std::vector<std::string> names;
  std::function<void(std::span<const double>, std::span<double>)> scalar_rhs;
  std::function<void(std::span<const polyalg::TPoly>, std::span<polyalg::TPoly>)> jet_rhs;
};

class DynamicsModel {
 public:
  static DynamicsModel transfer(const TransferParams& p) { return DynamicsModel(TransferModel(p)); }
  static DynamicsModel lander(const LanderParams& p) { return DynamicsModel(LanderModel(p)); }
  static DynamicsModel drone(const DroneParams& p) { return DynamicsModel(DroneModel(p)); }

  static DynamicsModel custom(CustomModel m) {
    if (m.names.empty() || !m.scalar_rhs) throw std::invalid_argument("custom model: needs state names and a scalar rhs");
    return DynamicsModel(std::move(m));
  }

  /// Register a custom system from one generic callable (invoked with double
  /// and with TPoly spans), keeping a single source for both paths.
  template <class F>
  static DynamicsModel custom_generic(std::string name, std::vector<std::string> state_names, F f) {
    CustomModel m;
    m.name = std::move(name);
    m.names = std::move(state_names);
    m.scalar_rhs = [f](std::span<const double> x, std::span<double> dx) { f(x, dx); };
    m.jet_rhs = [f](std::span<const polyalg::TPoly> x, std::span<polyalg::TPoly> dx) { f(x, dx); };
    return custom(std::move(m));
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int state_dim() const { return static_cast<int>(state_names_.size()); }
  [[nodiscard]] const std::vector<std::string>& state_names() const { return state_names_; }

  /// Physical (SI) value per internal unit, component-wise; and seconds per
  /// internal time unit.
  [[nodiscard]] const std::vector<double>& state_scale() const { return state_scale_; }
  [[nodiscard]] double time_scale() const { return time_scale_; }

  [[nodiscard]] std::vector<std::string> param_names() const {
    if (auto* m = std::get_if<TransferModel>(&kind_)) return m->param_names();
    if (auto* m = std::get_if<LanderModel>(&kind_)) return m->param_names();
    if (auto* m = std::get_if<DroneModel>(&kind_)) return m->param_names();
    return {};
  }

  /// Nominal SI value of a named parameter; throws for unknown names (and for
  /// custom models, which have none).
  [[nodiscard]] double param_nominal(const std::string& name) const;

  [[nodiscard]] const TransferModel* as_transfer() const { return std::get_if<TransferModel>(&kind_); }
  [[nodiscard]] const LanderModel* as_lander() const { return std::get_if<LanderModel>(&kind_); }
  [[nodiscard]] const DroneModel* as_drone() const { return std::get_if<DroneModel>(&kind_); }

  /// Check that a policy structurally fits this model (input width = state
  /// dimension, wiring matches the model's actuation). nullptr is always
  /// valid and means uncontrolled/coasting dynamics.
  void validate_policy_pairing(const netpoly::PolicyNet* policy) const;

  /// Fold parameters (with optional SI-valued jets) and return the
  /// closed-loop rhs functor. The functor references this model and the
  /// policy; both must outlive it. Unknown override names throw.
  template <class T>
  [[nodiscard]] RhsFn<T> prepared_rhs(const netpoly::PolicyNet* policy, const ParamJets<T>* overrides,
                                      const T& like) const {
    validate_policy_pairing(policy);
    if (overrides != nullptr && !overrides->empty()) {
      const auto known = param_names();
      for (const auto& [name, value] : *overrides)
        if (std::find(known.begin(), known.end(), name) == known.end())
          throw std::invalid_argument("model '" + name_ + "': unknown parameter override '" + name + "'");
    }
    if (auto* m = std::get_if<TransferModel>(&kind_)) {
      auto pp = m->template prepare<T>(overrides, like);
      return [m, policy, pp](std::span<const T> x, std::span<T> dx) { m->rhs(pp, policy, x, dx); };
    }
    if (auto* m = std::get_if<LanderModel>(&kind_)) {
      auto pp = m->template prepare<T>(overrides, like);
      return [m, policy, pp](std::span<const T> x, std::span<T> dx) { m->rhs(pp, policy, x, dx); };
    }
    if (auto* m = std::get_if<DroneModel>(&kind_)) {
      auto pp = m->template prepare<T>(overrides, like);
      return [m, policy, pp](std::span<const T> x, std::span<T> dx) { m->rhs(pp, policy, x, dx); };
    }
    const auto& m = std::get<CustomModel>(kind_);
    if (overrides != nullptr && !overrides->empty())
      throw std::invalid_argument("custom model '" + name_ + "' does not accept parameter overrides");
    if constexpr (std::is_same_v<T, double>) {
      return m.scalar_rhs;
    } else {
      if (!m.jet_rhs) throw std::invalid_argument("custom model '" + name_ + "' has no jet path");
      return m.jet_rhs;
    }
  }

 private:
  explicit DynamicsModel(TransferModel m)
      : kind_(std::move(m)),
        name_("transfer") {
    const auto& tm = std::get<TransferModel>(kind_);
    state_names_ = TransferModel::state_names();
    state_scale_ = tm.state_scale();
    time_scale_ = tm.time_scale();
  }
  explicit DynamicsModel(LanderModel m) : kind_(std::move(m)), name_("lander") {
    const auto& lm = std::get<LanderModel>(kind_);
    state_names_ = LanderModel::state_names();
    state_scale_ = lm.state_scale();
    time_scale_ = lm.time_scale();
  }
  explicit DynamicsModel(DroneModel m) : kind_(std::move(m)), name_("drone") {
    state_names_ = DroneModel::state_names();
    state_scale_ = DroneModel::state_scale();
    time_scale_ = DroneModel::time_scale();
  }
  explicit DynamicsModel(CustomModel m) : kind_(std::move(m)), name_(std::get<CustomModel>(kind_).name) {
    const auto& cm = std::get<CustomModel>(kind_);
    state_names_ = cm.names;
    state_scale_.assign(state_names_.size(), 1.0);
    time_scale_ = 1.0;
  }

  std::variant<TransferModel, LanderModel, DroneModel, CustomModel> kind_;
  std::string name_;
  std::vector<std::string> state_names_;
  std::vector<double> state_scale_;
  double time_scale_ = 1.0;
};

}  // namespace ettk::dynamics
