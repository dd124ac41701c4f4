#include "ettk/eventmap/event_spec.hpp"

#include <cmath>

namespace ettk::eventmap {

EventSpec EventSpec::sphere(std::array<double, 3> center, double radius, Direction dir) {
  if (!(radius > 0.0)) throw std::invalid_argument("EventSpec::sphere: radius must be > 0");
  EventSpec s;
  s.kind = Sphere{center, radius};
  s.direction = dir;
  return s;
}

EventSpec EventSpec::plane(std::vector<double> normal, double offset, Direction dir) {
  if (normal.empty()) throw std::invalid_argument("EventSpec::plane: normal must be nonempty");
  double n2 = 0.0;
  for (double v : normal) n2 += v * v;
  if (!(n2 > 0.0)) throw std::invalid_argument("EventSpec::plane: normal must be nonzero");
  EventSpec s;
  s.kind = Plane{std::move(normal), offset};
  s.direction = dir;
  return s;
}

EventSpec EventSpec::neural(netpoly::PolicyNet net, std::vector<int> features, std::vector<double> feature_scale,
                            Direction dir) {
  netpoly::validate_policy(net);
  if (net.wiring != netpoly::OutputWiring::raw)
    throw std::invalid_argument("EventSpec::neural: event nets must use raw output wiring");
  if (net.output_dim() != 1) throw std::invalid_argument("EventSpec::neural: event nets must have one output");
  if (features.empty()) {
    features.resize(static_cast<std::size_t>(net.input_dim));
    for (int i = 0; i < net.input_dim; ++i) features[static_cast<std::size_t>(i)] = i;
  }
  if (static_cast<int>(features.size()) != net.input_dim)
    throw std::invalid_argument("EventSpec::neural: feature count must equal net input_dim");
  if (feature_scale.empty()) feature_scale.assign(features.size(), 1.0);
  if (feature_scale.size() != features.size())
    throw std::invalid_argument("EventSpec::neural: feature_scale length must equal feature count");
  EventSpec s;
  s.kind = Neural{std::move(net), std::move(features), std::move(feature_scale)};
  s.direction = dir;
  return s;
}

EventSpec EventSpec::custom(std::string desc, std::function<double(std::span<const double>)> scalar,
                            std::function<polyalg::TPoly(std::span<const polyalg::TPoly>)> jet, Direction dir) {
  if (!scalar) throw std::invalid_argument("EventSpec::custom: scalar path is required");
  EventSpec s;
  s.kind = Custom{std::move(desc), std::move(scalar), std::move(jet)};
  s.direction = dir;
  return s;
}

void EventSpec::validate(int state_dim) const {
  if (const auto* p = std::get_if<Plane>(&kind)) {
    if (static_cast<int>(p->normal.size()) > state_dim)
      throw std::invalid_argument("EventSpec: plane normal has more components than the state");
  } else if (std::get_if<Sphere>(&kind) != nullptr) {
    if (state_dim < 3) throw std::invalid_argument("EventSpec: sphere events need at least 3 state components");
  } else if (const auto* nn = std::get_if<Neural>(&kind)) {
    for (int f : nn->features)
      if (f < 0 || f >= state_dim)
        throw std::invalid_argument("EventSpec: neural feature index " + std::to_string(f) + " out of range");
  }
  if (!(refine_tol > 0.0) || !(transversality_tol > 0.0) || !(graze_tol > 0.0))
    throw std::invalid_argument("EventSpec: tolerances must be > 0");
}

std::string EventSpec::describe() const {
  if (const auto* s = std::get_if<Sphere>(&kind))
    return "sphere(r=" + std::to_string(s->radius) + ")";
  if (std::get_if<Plane>(&kind) != nullptr) return "plane";
  if (std::get_if<Neural>(&kind) != nullptr) return "neural";
  return "custom:" + std::get<Custom>(kind).desc;
}

}  // namespace ettk::eventmap
