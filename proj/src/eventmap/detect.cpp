#include "ettk/eventmap/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ettk::eventmap {

namespace {

constexpr int kInteriorSamples = 6;

double eval_on_segment(const jetflow::DenseSegment& seg, const EventSpec& spec, double theta,
                       std::vector<double>& scratch) {
  scratch.resize(seg.rcont.size());
  for (std::size_t i = 0; i < seg.rcont.size(); ++i) scratch[i] = jetflow::dense_eval(seg.rcont[i], theta);
  return event_value<double>(spec, scratch);
}

bool direction_ok(const EventSpec& spec, double ea, double eb) {
  switch (spec.direction) {
    case EventSpec::Direction::rising: return ea < 0.0 && eb >= 0.0;
    case EventSpec::Direction::falling: return ea > 0.0 && eb <= 0.0;
    case EventSpec::Direction::any: return (ea < 0.0 && eb >= 0.0) || (ea > 0.0 && eb <= 0.0);
  }
  return false;
}

/// Bisect a bracketing [ta, tb] (in theta units) on the segment.
double bisect_theta(const jetflow::DenseSegment& seg, const EventSpec& spec, double ta, double tb, double ea,
                    std::vector<double>& scratch) {
  for (int it = 0; it < 120; ++it) {
    const double tm = 0.5 * (ta + tb);
    if (tm == ta || tm == tb) break;
    const double em = eval_on_segment(seg, spec, tm, scratch);
    const bool left = (ea < 0.0) ? (em < 0.0) : (em > 0.0);
    if (em == 0.0) return tm;
    if (left) {
      ta = tm;
      ea = em;
    } else {
      tb = tm;
    }
  }
  return 0.5 * (ta + tb);
}

/// Golden-section minimum of |e| over [a, b] in theta units.
std::pair<double, double> min_abs_on(const jetflow::DenseSegment& seg, const EventSpec& spec, double a, double b,
                                     std::vector<double>& scratch) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = std::abs(eval_on_segment(seg, spec, c, scratch));
  double fd = std::abs(eval_on_segment(seg, spec, d, scratch));
  for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = std::abs(eval_on_segment(seg, spec, c, scratch));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = std::abs(eval_on_segment(seg, spec, d, scratch));
    }
  }
  const double tm = 0.5 * (a + b);
  return {tm, std::abs(eval_on_segment(seg, spec, tm, scratch))};
}

/// Scan one segment for the first admissible crossing.
std::optional<EventHit> scan_segment(const jetflow::DenseSegment& seg, const EventSpec& spec,
                                     std::vector<double>& scratch) {
  const int m = kInteriorSamples + 1;
  double prev_theta = 0.0;
  double prev_e = eval_on_segment(seg, spec, 0.0, scratch);
  for (int j = 1; j <= m; ++j) {
    const double theta = static_cast<double>(j) / m;
    const double e = eval_on_segment(seg, spec, theta, scratch);
    if (direction_ok(spec, prev_e, e)) {
      const double theta_star =
          (e == 0.0 && prev_e != 0.0) ? theta : bisect_theta(seg, spec, prev_theta, theta, prev_e, scratch);
      EventHit hit;
      hit.t_star = seg.t0 + theta_star * seg.h;
      scratch.resize(seg.rcont.size());
      for (std::size_t i = 0; i < seg.rcont.size(); ++i) scratch[i] = jetflow::dense_eval(seg.rcont[i], theta_star);
      hit.state = scratch;
      hit.e_residual = std::abs(event_value<double>(spec, hit.state));
      const double dth = 1e-6;
      const double lo = std::max(0.0, theta_star - dth);
      const double hi = std::min(1.0, theta_star + dth);
      const double el = eval_on_segment(seg, spec, lo, scratch);
      const double eh = eval_on_segment(seg, spec, hi, scratch);
      hit.e_slope = (eh - el) / ((hi - lo) * seg.h);
      return hit;
    }
    prev_theta = theta;
    prev_e = e;
  }
  return std::nullopt;
}

DetectResult finish_detection(const std::vector<const jetflow::DenseSegment*>& segs, const EventSpec& spec,
                              std::optional<EventHit> hit) {
  DetectResult res;
  std::vector<double> scratch;
  if (hit.has_value()) {
    if (std::abs(hit->e_slope) < spec.transversality_tol) {
      res.status = DetectResult::Status::graze;
      res.min_abs_e = hit->e_residual;
      res.t_min_abs = hit->t_star;
      res.hit = std::move(hit);
      return res;
    }
    if (hit->e_residual > spec.refine_tol)
      throw numerical_error("detect: crossing refinement stalled at |e| = " + std::to_string(hit->e_residual));
    res.status = DetectResult::Status::hit;
    res.hit = std::move(hit);
    res.min_abs_e = res.hit->e_residual;
    res.t_min_abs = res.hit->t_star;
    return res;
  }
  // No sign change anywhere: minimize |e| per segment to classify the miss.
  double best = std::numeric_limits<double>::infinity();
  double t_best = 0.0;
  for (const jetflow::DenseSegment* seg : segs) {
    const auto [theta, val] = min_abs_on(*seg, spec, 0.0, 1.0, scratch);
    if (val < best) {
      best = val;
      t_best = seg->t0 + theta * seg->h;
    }
  }
  res.min_abs_e = best;
  res.t_min_abs = t_best;
  res.status = (best <= spec.graze_tol) ? DetectResult::Status::graze : DetectResult::Status::miss;
  return res;
}

}  // namespace

DetectResult detect(const jetflow::Trajectory& traj, const EventSpec& spec) {
  if (traj.segments.empty()) throw std::invalid_argument("detect: trajectory has no dense segments");
  spec.validate(static_cast<int>(traj.states.front().size()));
  std::vector<double> scratch;
  std::vector<const jetflow::DenseSegment*> segs;
  segs.reserve(traj.segments.size());
  for (const auto& seg : traj.segments) segs.push_back(&seg);
  for (const auto& seg : traj.segments) {
    auto hit = scan_segment(seg, spec, scratch);
    if (hit.has_value()) return finish_detection(segs, spec, std::move(hit));
  }
  return finish_detection(segs, spec, std::nullopt);
}

EventIntegration integrate_to_event(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                                    std::span<const double> x0, const EventSpec& spec, double horizon,
                                    const jetflow::IntegrateOptions& opts,
                                    const dynamics::ParamJets<double>* overrides) {
  if (static_cast<int>(x0.size()) != model.state_dim())
    throw std::invalid_argument("integrate_to_event: initial state length mismatches model dimension");
  spec.validate(model.state_dim());
  auto rhs = model.prepared_rhs<double>(policy, overrides, 0.0);
  jetflow::IntegrateOptions o = opts;
  o.dense = true;

  EventIntegration out;
  jetflow::Trajectory& traj = out.trajectory;
  std::vector<double> y(x0.begin(), x0.end());
  traj.times.push_back(0.0);
  traj.states.emplace_back(y);
  std::vector<double> scratch;
  std::optional<EventHit> hit;
  traj.stats = jetflow::integrate_adaptive<double>(
      rhs, y, 0.0, horizon, o,
      [&](double t_old, double h, const std::vector<double>& y_new, const jetflow::DenseData<double>* dense) {
        traj.times.push_back(t_old + h);
        traj.states.emplace_back(y_new);
        traj.segments.push_back(jetflow::DenseSegment{t_old, h, *dense});
        hit = scan_segment(traj.segments.back(), spec, scratch);
        return !hit.has_value();
      });

  std::vector<const jetflow::DenseSegment*> segs;
  segs.reserve(traj.segments.size());
  for (const auto& seg : traj.segments) segs.push_back(&seg);
  out.detection = finish_detection(segs, spec, std::move(hit));
  return out;
}

EventIntegration integrate_to_event_or_throw(const dynamics::DynamicsModel& model, const netpoly::PolicyNet* policy,
                                             std::span<const double> x0, const EventSpec& spec, double horizon,
                                             const jetflow::IntegrateOptions& opts,
                                             const dynamics::ParamJets<double>* overrides) {
  EventIntegration out = integrate_to_event(model, policy, x0, spec, horizon, opts, overrides);
  switch (out.detection.status) {
    case DetectResult::Status::hit: return out;
    case DetectResult::Status::graze:
      throw grazing_error("event contact is tangential (min |e| = " + std::to_string(out.detection.min_abs_e) +
                          " at t = " + std::to_string(out.detection.t_min_abs) + ", |de/dt| below " +
                          std::to_string(spec.transversality_tol) + ")");
    case DetectResult::Status::miss:
      throw event_miss_error("event not reached within horizon (min |e| = " +
                             std::to_string(out.detection.min_abs_e) + ")");
  }
  throw numerical_error("integrate_to_event: unreachable");
}

}  // namespace ettk::eventmap
