#include "ettk/netpoly/policy_net.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace ettk::netpoly {

using nlohmann::json;

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::sin: return "sin";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softplus: return "softplus";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  if (name == "linear") return Activation::linear;
  if (name == "sin") return Activation::sin;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "softplus") return Activation::softplus;
  throw config_error("unknown activation '" + name + "'");
}

std::string wiring_name(OutputWiring w) {
  switch (w) {
    case OutputWiring::direction: return "direction";
    case OutputWiring::throttle_direction: return "throttle_direction";
    case OutputWiring::rotor_sigmoid: return "rotor_sigmoid";
    case OutputWiring::raw: return "raw";
  }
  return "?";
}

OutputWiring wiring_from_name(const std::string& name) {
  if (name == "direction") return OutputWiring::direction;
  if (name == "throttle_direction") return OutputWiring::throttle_direction;
  if (name == "rotor_sigmoid") return OutputWiring::rotor_sigmoid;
  if (name == "raw") return OutputWiring::raw;
  throw config_error("unknown output wiring '" + name + "'");
}

long param_count(const PolicyNet& net) {
  long n = 0;
  for (const Layer& layer : net.layers) n += static_cast<long>(layer.rows) * layer.cols + layer.rows;
  return n;
}

void validate_policy(const PolicyNet& net) {
  if (net.input_dim < 1) throw config_error("policy: input_dim must be >= 1");
  if (net.layers.empty()) throw config_error("policy: needs at least one layer");
  if (static_cast<int>(net.input_shift.size()) != net.input_dim ||
      static_cast<int>(net.input_scale.size()) != net.input_dim)
    throw config_error("policy: input_shift/input_scale length must equal input_dim");
  int width = net.input_dim;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const Layer& layer = net.layers[li];
    const std::string where = "policy layer " + std::to_string(li);
    if (layer.rows < 1 || layer.cols < 1) throw config_error(where + ": rows and cols must be >= 1");
    if (layer.cols != width)
      throw config_error(where + ": cols=" + std::to_string(layer.cols) + " does not chain with previous width " +
                         std::to_string(width));
    if (layer.weights.size() != static_cast<std::size_t>(layer.rows) * layer.cols)
      throw config_error(where + ": weights size " + std::to_string(layer.weights.size()) + " != rows*cols");
    if (layer.bias.size() != static_cast<std::size_t>(layer.rows))
      throw config_error(where + ": bias size != rows");
    for (double w : layer.weights)
      if (!std::isfinite(w)) throw config_error(where + ": non-finite weight");
    for (double b : layer.bias)
      if (!std::isfinite(b)) throw config_error(where + ": non-finite bias");
    if (!(layer.w0 > 0.0) || !std::isfinite(layer.w0)) throw config_error(where + ": w0 must be finite and > 0");
    width = layer.rows;
  }
  for (double s : net.input_scale)
    if (!std::isfinite(s) || s == 0.0) throw config_error("policy: input_scale entries must be finite and nonzero");
  for (double s : net.input_shift)
    if (!std::isfinite(s)) throw config_error("policy: input_shift entries must be finite");
  const int out = net.output_dim();
  switch (net.wiring) {
    case OutputWiring::direction:
      if (out != 3) throw config_error("policy: 'direction' wiring needs exactly 3 outputs");
      break;
    case OutputWiring::throttle_direction:
      if (out != 4) throw config_error("policy: 'throttle_direction' wiring needs exactly 4 outputs");
      break;
    case OutputWiring::rotor_sigmoid:
    case OutputWiring::raw:
      break;
  }
}

PolicyNet load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("load_policy: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error("load_policy: '" + path + "' is not valid JSON: " + e.what());
  }
  PolicyNet net;
  try {
    net.input_dim = j.at("input_dim").get<int>();
    net.input_shift = j.at("input_shift").get<std::vector<double>>();
    net.input_scale = j.at("input_scale").get<std::vector<double>>();
    net.wiring = wiring_from_name(j.at("output_wiring").get<std::string>());
    for (const json& jl : j.at("layers")) {
      Layer layer;
      layer.rows = jl.at("rows").get<int>();
      layer.cols = jl.at("cols").get<int>();
      layer.weights = jl.at("weights").get<std::vector<double>>();
      layer.bias = jl.at("bias").get<std::vector<double>>();
      layer.activation = activation_from_name(jl.at("activation").get<std::string>());
      layer.w0 = jl.value("w0", 1.0);
      net.layers.push_back(std::move(layer));
    }
  } catch (const json::exception& e) {
    throw config_error("load_policy: '" + path + "' violates the weight-file schema: " + e.what());
  }
  validate_policy(net);
  return net;
}

void save_policy(const PolicyNet& net, const std::string& path) {
  validate_policy(net);
  json layers = json::array();
  for (const Layer& layer : net.layers) {
    json jl{{"rows", layer.rows},           {"cols", layer.cols}, {"weights", layer.weights},
            {"bias", layer.bias},           {"activation", activation_name(layer.activation)}};
    if (layer.w0 != 1.0) jl["w0"] = layer.w0;
    layers.push_back(std::move(jl));
  }
  json j{{"input_dim", net.input_dim},
         {"input_shift", net.input_shift},
         {"input_scale", net.input_scale},
         {"layers", std::move(layers)},
         {"output_wiring", wiring_name(net.wiring)}};
  std::ofstream out(path);
  if (!out) throw config_error("save_policy: cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw config_error("save_policy: write to '" + path + "' failed");
}

}  // namespace ettk::netpoly
