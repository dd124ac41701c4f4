#pragma once
/**
 * @file taylor_map.hpp
 * @brief Vector-valued truncated polynomial maps R^n -> R^m.
 */

#include <span>
#include <string>
#include <vector>

#include "ettk/polyalg/tpoly.hpp"

namespace ettk::polyalg {

/// An ordered set of components over one shared algebra, with variable
/// labels. Component i approximates output i as a polynomial in the labelled
/// perturbation variables.
class TaylorMap {
 public:
  TaylorMap() = default;
  TaylorMap(std::vector<TPoly> components, std::vector<std::string> var_labels);

  [[nodiscard]] int nvars() const { return components_.at(0).nvars(); }
  [[nodiscard]] int order() const { return components_.at(0).order(); }
  [[nodiscard]] int dim() const { return static_cast<int>(components_.size()); }

  [[nodiscard]] const TPoly& component(int i) const { return components_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] const std::vector<TPoly>& components() const { return components_; }
  [[nodiscard]] const std::vector<std::string>& var_labels() const { return var_labels_; }

  /// Evaluate every component at a perturbation vector.
  [[nodiscard]] std::vector<double> eval(std::span<const double> point) const;

  /// Constant parts (the image of the zero perturbation, exactly).
  [[nodiscard]] std::vector<double> constant_part() const;

 private:
  std::vector<TPoly> components_;
  std::vector<std::string> var_labels_;
};

}  // namespace ettk::polyalg
