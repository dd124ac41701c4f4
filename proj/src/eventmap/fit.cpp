#include "ettk/eventmap/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ettk/rng.hpp"

namespace ettk::eventmap {

namespace {

struct Batch {
  // activations[l]: n x width(l) row-major, l = 0 holds normalized inputs
  std::vector<std::vector<double>> acts;
  std::vector<std::vector<double>> pre;  // pre-activation per trained layer
};

void forward(const netpoly::PolicyNet& net, const std::vector<double>& inputs, std::size_t n, Batch& b) {
  const std::size_t l_count = net.layers.size();
  b.acts.resize(l_count + 1);
  b.pre.resize(l_count);
  b.acts[0] = inputs;
  for (std::size_t l = 0; l < l_count; ++l) {
    const netpoly::Layer& layer = net.layers[l];
    const std::size_t in_w = static_cast<std::size_t>(layer.cols);
    const std::size_t out_w = static_cast<std::size_t>(layer.rows);
    b.pre[l].assign(n * out_w, 0.0);
    b.acts[l + 1].assign(n * out_w, 0.0);
    const std::vector<double>& prev = b.acts[l];
    for (std::size_t s = 0; s < n; ++s) {
      const double* xin = prev.data() + s * in_w;
      double* z = b.pre[l].data() + s * out_w;
      double* a = b.acts[l + 1].data() + s * out_w;
      for (std::size_t i = 0; i < out_w; ++i) {
        double acc = layer.bias[i];
        const double* w = layer.weights.data() + i * in_w;
        for (std::size_t j = 0; j < in_w; ++j) acc += w[j] * xin[j];
        z[i] = acc;
        a[i] = (layer.activation == netpoly::Activation::sin) ? std::sin(layer.w0 * acc) : acc;
      }
    }
  }
}

}  // namespace

FitResult fit_event_net(std::span<const std::array<double, 3>> points, std::span<const double> labels,
                        const FitOptions& opts) {
  if (points.size() != labels.size()) throw std::invalid_argument("fit_event_net: points/labels length mismatch");
  if (opts.hidden.empty()) throw std::invalid_argument("fit_event_net: needs at least one hidden layer");
  for (int h : opts.hidden)
    if (h < 1) throw std::invalid_argument("fit_event_net: hidden widths must be >= 1");
  if (!(opts.holdout_fraction > 0.0 && opts.holdout_fraction < 0.5))
    throw std::invalid_argument("fit_event_net: holdout_fraction must lie in (0, 0.5)");

  // Architecture: 3 -> hidden (sin) -> 1 (linear).
  netpoly::PolicyNet net;
  net.input_dim = 3;
  net.wiring = netpoly::OutputWiring::raw;
  {
    int prev = 3;
    for (int h : opts.hidden) {
      netpoly::Layer layer;
      layer.rows = h;
      layer.cols = prev;
      layer.activation = netpoly::Activation::sin;
      layer.w0 = opts.w0;
      net.layers.push_back(layer);
      prev = h;
    }
    netpoly::Layer head;
    head.rows = 1;
    head.cols = prev;
    head.activation = netpoly::Activation::linear;
    net.layers.push_back(head);
  }
  const long n_params = [&] {
    long n = 0;
    for (const auto& l : net.layers) n += static_cast<long>(l.rows) * l.cols + l.rows;
    return n;
  }();
  if (static_cast<long>(points.size()) < n_params * opts.min_samples_per_param)
    throw std::invalid_argument("fit_event_net: " + std::to_string(points.size()) + " samples for " +
                                std::to_string(n_params) + " parameters (need >= " +
                                std::to_string(opts.min_samples_per_param) + " per parameter)");

  // Normalize inputs into the net's own affine stage.
  net.input_shift.assign(3, 0.0);
  net.input_scale.assign(3, 1.0);
  for (int d = 0; d < 3; ++d) {
    double lo = points[0][static_cast<std::size_t>(d)], hi = lo;
    for (const auto& p : points) {
      lo = std::min(lo, p[static_cast<std::size_t>(d)]);
      hi = std::max(hi, p[static_cast<std::size_t>(d)]);
    }
    net.input_shift[static_cast<std::size_t>(d)] = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    net.input_scale[static_cast<std::size_t>(d)] = (half > 0.0) ? 1.0 / half : 1.0;
  }

  // Deterministic initialization and split.
  CounterRng init_rng(opts.seed, 0xf17);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    netpoly::Layer& layer = net.layers[l];
    const double fan_in = static_cast<double>(layer.cols);
    const double bound = (l == 0) ? 1.0 / fan_in : std::sqrt(6.0 / fan_in) / opts.w0;
    layer.weights.resize(static_cast<std::size_t>(layer.rows) * layer.cols);
    layer.bias.assign(static_cast<std::size_t>(layer.rows), 0.0);
    for (double& w : layer.weights) w = init_rng.uniform(-bound, bound);
    for (double& b : layer.bias) b = init_rng.uniform(-0.1, 0.1);
  }

  const std::size_t n_total = points.size();
  std::vector<std::size_t> perm(n_total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  CounterRng split_rng(opts.seed, 0x5b1);
  for (std::size_t i = n_total - 1; i > 0; --i) {
    const std::size_t j = split_rng.next_u64() % (i + 1);
    std::swap(perm[i], perm[j]);
  }
  const std::size_t n_hold = std::max<std::size_t>(1, static_cast<std::size_t>(opts.holdout_fraction * n_total));
  const std::size_t n_train = n_total - n_hold;

  auto gather = [&](std::size_t begin, std::size_t count, std::vector<double>& xs, std::vector<double>& ys) {
    xs.resize(count * 3);
    ys.resize(count);
    for (std::size_t s = 0; s < count; ++s) {
      const auto& p = points[perm[begin + s]];
      for (int d = 0; d < 3; ++d)
        xs[s * 3 + static_cast<std::size_t>(d)] =
            (p[static_cast<std::size_t>(d)] - net.input_shift[static_cast<std::size_t>(d)]) *
            net.input_scale[static_cast<std::size_t>(d)];
      ys[s] = labels[perm[begin + s]];
    }
  };
  std::vector<double> xs_train, ys_train, xs_hold, ys_hold;
  gather(0, n_train, xs_train, ys_train);
  gather(n_train, n_hold, xs_hold, ys_hold);

  // Adam state aligned with (weights, bias) per layer.
  struct Moments {
    std::vector<double> mw, vw, mb, vb;
  };
  std::vector<Moments> adam(net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    adam[l].mw.assign(net.layers[l].weights.size(), 0.0);
    adam[l].vw.assign(net.layers[l].weights.size(), 0.0);
    adam[l].mb.assign(net.layers[l].bias.size(), 0.0);
    adam[l].vb.assign(net.layers[l].bias.size(), 0.0);
  }

  Batch batch;
  std::vector<std::vector<double>> delta(net.layers.size());
  double train_mse = 0.0;
  for (int step = 1; step <= opts.iterations; ++step) {
    forward(net, xs_train, n_train, batch);
    const std::vector<double>& out = batch.acts.back();
    train_mse = 0.0;
    for (std::size_t s = 0; s < n_train; ++s) {
      const double r = out[s] - ys_train[s];
      train_mse += r * r;
    }
    train_mse /= static_cast<double>(n_train);
    if (!std::isfinite(train_mse))
      throw numerical_error("fit_event_net: loss diverged at iteration " + std::to_string(step) + " (seed " +
                            std::to_string(opts.seed) + ", learning rate " + std::to_string(opts.learning_rate) +
                            ")");

    // Backward pass: delta[l] = dL/d(pre-activation of layer l).
    const std::size_t last = net.layers.size() - 1;
    delta[last].assign(n_train, 0.0);
    for (std::size_t s = 0; s < n_train; ++s)
      delta[last][s] = 2.0 * (out[s] - ys_train[s]) / static_cast<double>(n_train);
    for (std::size_t l = last; l-- > 0;) {
      const netpoly::Layer& upper = net.layers[l + 1];
      const std::size_t up_out = static_cast<std::size_t>(upper.rows);
      const std::size_t width = static_cast<std::size_t>(net.layers[l].rows);
      delta[l].assign(n_train * width, 0.0);
      for (std::size_t s = 0; s < n_train; ++s) {
        const double* du = delta[l + 1].data() + s * up_out;
        const double* z = batch.pre[l].data() + s * width;
        double* dl = delta[l].data() + s * width;
        for (std::size_t j = 0; j < width; ++j) {
          double acc = 0.0;
          for (std::size_t i = 0; i < up_out; ++i) acc += du[i] * upper.weights[i * width + j];
          const double g = (net.layers[l].activation == netpoly::Activation::sin)
                               ? net.layers[l].w0 * std::cos(net.layers[l].w0 * z[j])
                               : 1.0;
          dl[j] = acc * g;
        }
      }
    }

    const double bc1 = 1.0 - std::pow(opts.beta1, step);
    const double bc2 = 1.0 - std::pow(opts.beta2, step);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      netpoly::Layer& layer = net.layers[l];
      const std::size_t in_w = static_cast<std::size_t>(layer.cols);
      const std::size_t out_w = static_cast<std::size_t>(layer.rows);
      const std::vector<double>& below = batch.acts[l];
      for (std::size_t i = 0; i < out_w; ++i) {
        double gb = 0.0;
        for (std::size_t s = 0; s < n_train; ++s) gb += delta[l][s * out_w + i];
        auto adam_step = [&](double g, double& m, double& v, double& param) {
          m = opts.beta1 * m + (1.0 - opts.beta1) * g;
          v = opts.beta2 * v + (1.0 - opts.beta2) * g * g;
          param -= opts.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + opts.adam_eps);
        };
        for (std::size_t j = 0; j < in_w; ++j) {
          double gw = 0.0;
          for (std::size_t s = 0; s < n_train; ++s) gw += delta[l][s * out_w + i] * below[s * in_w + j];
          adam_step(gw, adam[l].mw[i * in_w + j], adam[l].vw[i * in_w + j], layer.weights[i * in_w + j]);
        }
        adam_step(gb, adam[l].mb[i], adam[l].vb[i], layer.bias[i]);
      }
    }
  }

  // Holdout evaluation (inputs already normalized in gather, so evaluate the
  // trained stack directly).
  Batch hb;
  forward(net, xs_hold, n_hold, hb);
  double hold_mse = 0.0;
  for (std::size_t s = 0; s < n_hold; ++s) {
    const double r = hb.acts.back()[s] - ys_hold[s];
    hold_mse += r * r;
  }
  hold_mse /= static_cast<double>(n_hold);

  FitResult res;
  res.net = std::move(net);
  res.train_mse = train_mse;
  res.holdout_mse = hold_mse;
  res.holdout_rmse = std::sqrt(hold_mse);
  res.param_count = n_params;
  return res;
}

}  // namespace ettk::eventmap
