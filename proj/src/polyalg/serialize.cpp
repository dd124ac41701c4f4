#include "ettk/polyalg/serialize.hpp"

#include <fstream>

#include "ettk/errors.hpp"

namespace ettk::polyalg {

using nlohmann::json;

json poly_terms_to_json(const TPoly& p) {
  p.check_valid();
  json terms = json::array();
  const IndexTable& t = p.table();
  auto c = p.coeffs();
  for (std::size_t r = 0; r < c.size(); ++r) {
    if (c[r] == 0.0) continue;
    const auto e = t.exponents(r);
    json alpha = json::array();
    for (auto ei : e) alpha.push_back(static_cast<int>(ei));
    terms.push_back(json{{"alpha", std::move(alpha)}, {"coeff", c[r]}});
  }
  return terms;
}

TPoly poly_terms_from_json(const json& terms, int nvars, int order) {
  if (!terms.is_array()) throw config_error("polynomial terms: expected an array");
  TPoly p = TPoly::constant(nvars, order, 0.0);
  for (const json& term : terms) {
    if (!term.contains("alpha") || !term.contains("coeff"))
      throw config_error("polynomial term: missing alpha or coeff");
    const auto& ja = term.at("alpha");
    if (!ja.is_array() || static_cast<int>(ja.size()) != nvars)
      throw config_error("polynomial term: alpha length must equal nvars=" + std::to_string(nvars));
    std::vector<int> alpha;
    alpha.reserve(ja.size());
    int total = 0;
    for (const json& e : ja) {
      const int ei = e.get<int>();
      if (ei < 0) throw config_error("polynomial term: negative exponent");
      total += ei;
      alpha.push_back(ei);
    }
    if (total > order)
      throw config_error("polynomial term: degree " + std::to_string(total) + " exceeds order " + std::to_string(order));
    p.set_coeff(alpha, term.at("coeff").get<double>());
  }
  return p;
}

json map_to_json(const TaylorMap& map) {
  json components = json::array();
  for (const TPoly& c : map.components()) components.push_back(json{{"terms", poly_terms_to_json(c)}});
  return json{{"nvars", map.nvars()},
              {"order", map.order()},
              {"labels", map.var_labels()},
              {"components", std::move(components)}};
}

TaylorMap map_from_json(const json& j) {
  for (const char* key : {"nvars", "order", "labels", "components"})
    if (!j.contains(key)) throw config_error(std::string("taylor map: missing field '") + key + "'");
  const int nvars = j.at("nvars").get<int>();
  const int order = j.at("order").get<int>();
  if (nvars < 1 || order < 1) throw config_error("taylor map: nvars and order must be >= 1");
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  if (static_cast<int>(labels.size()) != nvars) throw config_error("taylor map: labels length must equal nvars");
  std::vector<TPoly> comps;
  for (const json& jc : j.at("components")) {
    if (!jc.contains("terms")) throw config_error("taylor map: component missing 'terms'");
    comps.push_back(poly_terms_from_json(jc.at("terms"), nvars, order));
  }
  if (comps.empty()) throw config_error("taylor map: needs at least one component");
  return TaylorMap(std::move(comps), std::move(labels));
}

void save_map(const TaylorMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("save_map: cannot open '" + path + "' for writing");
  out << map_to_json(map).dump(2) << "\n";
  if (!out) throw config_error("save_map: write to '" + path + "' failed");
}

TaylorMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("load_map: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error("load_map: '" + path + "' is not valid JSON: " + e.what());
  }
  return map_from_json(j);
}

}  // namespace ettk::polyalg
