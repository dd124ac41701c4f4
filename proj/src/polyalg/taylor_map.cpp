#include "ettk/polyalg/taylor_map.hpp"

#include <stdexcept>
#include <string>

namespace ettk::polyalg {

TaylorMap::TaylorMap(std::vector<TPoly> components, std::vector<std::string> var_labels)
    : components_(std::move(components)), var_labels_(std::move(var_labels)) {
  if (components_.empty()) throw std::invalid_argument("TaylorMap: needs at least one component");
  for (const TPoly& c : components_) {
    c.check_valid();
    if (c.nvars() != components_[0].nvars() || c.order() != components_[0].order())
      throw std::invalid_argument("TaylorMap: components live in different algebras");
  }
  if (static_cast<int>(var_labels_.size()) != components_[0].nvars())
    throw std::invalid_argument("TaylorMap: expected " + std::to_string(components_[0].nvars()) +
                                " variable labels, got " + std::to_string(var_labels_.size()));
}

std::vector<double> TaylorMap::eval(std::span<const double> point) const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const TPoly& c : components_) out.push_back(c.eval(point));
  return out;
}

std::vector<double> TaylorMap::constant_part() const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const TPoly& c : components_) out.push_back(c.coeff0());
  return out;
}

}  // namespace ettk::polyalg
