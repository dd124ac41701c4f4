#include "ettk/jetflow/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace ettk::jetflow {

std::vector<double> Trajectory::state_at(double t) const {
  if (times.empty()) throw std::invalid_argument("Trajectory::state_at: empty trajectory");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t seg = static_cast<std::size_t>(it - times.begin()) - 1;
  const DenseSegment& s = segments[seg];
  const double theta = (t - s.t0) / s.h;
  std::vector<double> out(s.rcont.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dense_eval(s.rcont[i], theta);
  return out;
}

Trajectory integrate(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                     std::span<const double> x0, double t_end, const IntegrateOptions& opts,
                     const dynamics::ParamJets<double>* overrides) {
  if (static_cast<int>(x0.size()) != model.state_dim())
    throw std::invalid_argument("integrate: initial state length mismatches model dimension");
  auto rhs = model.prepared_rhs<double>(policy, overrides, 0.0);
  IntegrateOptions o = opts;
  o.dense = true;
  Trajectory traj;
  std::vector<double> y(x0.begin(), x0.end());
  traj.times.push_back(0.0);
  traj.states.emplace_back(y);
  traj.stats = integrate_adaptive<double>(
      rhs, y, 0.0, t_end, o, [&](double t_old, double h, const std::vector<double>& y_new, const DenseData<double>* dense) {
        traj.times.push_back(t_old + h);
        traj.states.emplace_back(y_new);
        traj.segments.push_back(DenseSegment{t_old, h, *dense});
        return true;
      });
  return traj;
}

}  // namespace ettk::jetflow
