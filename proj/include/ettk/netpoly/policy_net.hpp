#pragma once
/**
 * @file policy_net.hpp
 * @brief Feedforward networks evaluated over scalars or truncated polynomials.
 *
 * One evaluation path serves both closed-loop scalar integration and jet
 * transport: eval_net is templated on the algebra and resolves sin/tanh/...
 * through argument-dependent lookup. Layers are dense affine maps with a
 * per-layer activation; sin layers carry a frequency factor w0 applied before
 * the activation (periodic-activation networks). The final layer is linear by
 * convention; head post-processing (normalization, sigmoid squashing) is the
 * caller's output wiring, because mixed per-head activations are not a layer
 * property.
 */

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "ettk/errors.hpp"
#include "ettk/polyalg/analytic.hpp"
#include "ettk/polyalg/scalar_fns.hpp"
#include "ettk/polyalg/tpoly.hpp"

namespace ettk::netpoly {

enum class Activation { linear, sin, tanh, sigmoid, softplus };

[[nodiscard]] std::string activation_name(Activation a);
[[nodiscard]] Activation activation_from_name(const std::string& name);

/// How the raw network outputs are consumed by a closed loop:
///  - direction:          3 outputs, normalized to a unit thrust direction
///  - throttle_direction: 4 outputs, sigmoid(out0) throttle + normalized dir
///  - rotor_sigmoid:      sigmoid on every output (rotor commands in [0,1])
///  - raw:                outputs used as-is (event networks, tests)
enum class OutputWiring { direction, throttle_direction, rotor_sigmoid, raw };

[[nodiscard]] std::string wiring_name(OutputWiring w);
[[nodiscard]] OutputWiring wiring_from_name(const std::string& name);

struct Layer {
  int rows = 0;                  // output width
  int cols = 0;                  // input width
  std::vector<double> weights;   // rows x cols, row-major
  std::vector<double> bias;      // rows
  Activation activation = Activation::linear;
  double w0 = 1.0;               // pre-activation frequency (sin layers)
};

struct PolicyNet {
  int input_dim = 0;
  std::vector<double> input_shift;  // feature j -> (x_j - shift_j) * scale_j
  std::vector<double> input_scale;
  std::vector<Layer> layers;
  OutputWiring wiring = OutputWiring::raw;

  [[nodiscard]] int output_dim() const { return layers.empty() ? 0 : layers.back().rows; }
};

/// Trainable parameter count: sum over layers of rows*cols + rows.
[[nodiscard]] long param_count(const PolicyNet& net);

/// Structural validation (dimension chaining, buffer sizes, finite weights);
/// throws config_error with the offending layer in the message.
void validate_policy(const PolicyNet& net);

[[nodiscard]] PolicyNet load_policy(const std::string& path);
void save_policy(const PolicyNet& net, const std::string& path);

template <class T>
[[nodiscard]] T apply_activation(Activation a, double w0, const T& z) {
  using std::sin;
  using std::tanh;
  using ettk::alg::sigmoid;
  using ettk::alg::softplus;
  using ettk::polyalg::sigmoid;
  using ettk::polyalg::softplus;
  switch (a) {
    case Activation::linear: return z;
    case Activation::sin: return sin(z * w0);
    case Activation::tanh: return tanh(z);
    case Activation::sigmoid: return sigmoid(z);
    case Activation::softplus: return softplus(z);
  }
  throw std::invalid_argument("apply_activation: unknown activation");
}

/// Forward pass over any algebra. Input length must equal input_dim.
template <class T>
[[nodiscard]] std::vector<T> eval_net(const PolicyNet& net, std::span<const T> input) {
  if (static_cast<int>(input.size()) != net.input_dim)
    throw std::invalid_argument("eval_net: expected " + std::to_string(net.input_dim) + " inputs, got " +
                                std::to_string(input.size()));
  if (net.layers.empty()) throw std::invalid_argument("eval_net: network has no layers");
  using ettk::alg::constant_like;
  using ettk::polyalg::constant_like;
  std::vector<T> cur;
  cur.reserve(input.size());
  for (std::size_t j = 0; j < input.size(); ++j)
    cur.push_back((input[j] - net.input_shift[j]) * net.input_scale[j]);
  std::vector<T> next;
  for (const Layer& layer : net.layers) {
    next.clear();
    next.reserve(static_cast<std::size_t>(layer.rows));
    for (int i = 0; i < layer.rows; ++i) {
      T z = constant_like(cur[0], layer.bias[static_cast<std::size_t>(i)]);
      const double* wrow = layer.weights.data() + static_cast<std::size_t>(i) * layer.cols;
      for (int j = 0; j < layer.cols; ++j) z += cur[static_cast<std::size_t>(j)] * wrow[j];
      next.push_back(apply_activation(layer.activation, layer.w0, z));
    }
    cur.swap(next);
  }
  return cur;
}

/// Unit vector along v (3 components). The norm of the reference value (the
/// scalar itself, or the constant part of a jet) must exceed min_norm.
template <class T>
[[nodiscard]] std::array<T, 3> normalize_direction(std::span<const T> v, double min_norm = 1e-12) {
  if (v.size() != 3) throw std::invalid_argument("normalize_direction: expected 3 components");
  using std::sqrt;
  using ettk::alg::recip;
  using ettk::polyalg::recip;
  T n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  double ref;
  if constexpr (std::is_same_v<T, double>) {
    ref = n2;
  } else {
    ref = n2.coeff0();
  }
  if (!(ref > min_norm * min_norm))
    throw numerical_error("normalize_direction: direction norm " + std::to_string(std::sqrt(std::max(ref, 0.0))) +
                          " below minimum " + std::to_string(min_norm));
  T inv = recip(sqrt(n2));
  return {v[0] * inv, v[1] * inv, v[2] * inv};
}

}  // namespace ettk::netpoly
