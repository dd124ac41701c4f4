#pragma once
/**
 * @file serialize.hpp
 * @brief JSON (de)serialization of polynomials and maps.
 *
 * Layout: {"nvars": n, "order": k, "labels": [...], "components":
 * [{"terms": [{"alpha": [...], "coeff": c}, ...]}, ...]}. Terms carry only
 * nonzero coefficients in graded-lex order; coefficients round-trip exactly
 * (shortest-representation doubles).
 */

#include <string>

#include <json.hpp>

#include "ettk/polyalg/taylor_map.hpp"
#include "ettk/polyalg/tpoly.hpp"

namespace ettk::polyalg {

[[nodiscard]] nlohmann::json poly_terms_to_json(const TPoly& p);
[[nodiscard]] TPoly poly_terms_from_json(const nlohmann::json& terms, int nvars, int order);

[[nodiscard]] nlohmann::json map_to_json(const TaylorMap& map);
[[nodiscard]] TaylorMap map_from_json(const nlohmann::json& j);

/// File helpers (throw config_error on malformed content or I/O failure).
void save_map(const TaylorMap& map, const std::string& path);
[[nodiscard]] TaylorMap load_map(const std::string& path);

}  // namespace ettk::polyalg
