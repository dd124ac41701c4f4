#pragma once
/**
 * @file mesh.hpp
 * @brief Triangle meshes for terrain-style event manifolds.
 *
 * Meshes supply training labels for neural event manifolds: the signed
 * boundary value sign(p) * dist(p, surface) - h, negative strictly inside
 * the offset surface. Containment uses parity ray casting with ray-triangle
 * intersection tests; near-degenerate hits trigger a deterministic
 * direction retry so grazing rays cannot corrupt the parity.
 */

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ettk/errors.hpp"

namespace ettk::eventmap {

struct TriangleMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;

  [[nodiscard]] std::size_t vertex_count() const { return vertices.size(); }
  [[nodiscard]] std::size_t triangle_count() const { return triangles.size(); }
};

/// Load ASCII or binary STL (auto-detected) or Wavefront OBJ by extension.
/// STL vertices are welded exactly (bitwise-equal coordinates).
[[nodiscard]] TriangleMesh load_mesh(const std::string& path);

/// Every directed edge must appear exactly once and be matched by its
/// reverse: closed, consistently oriented, two triangles per edge.
/// Throws config_error describing the first defect otherwise.
void validate_watertight(const TriangleMesh& mesh);

/// Parity ray cast: true when p lies strictly inside the closed surface.
/// Points within eps of the surface are classified by the parity of the
/// retry-stable ray; callers needing boundary semantics use the signed value.
[[nodiscard]] bool point_in_mesh(const TriangleMesh& mesh, const std::array<double, 3>& p);

/// Unsigned distance from p to the surface.
[[nodiscard]] double mesh_distance(const TriangleMesh& mesh, const std::array<double, 3>& p);

/// sign(p) * dist(p, surface) - h with sign = -1 inside; the h-offset
/// surface is the zero set used as the landing event manifold.
[[nodiscard]] double signed_boundary_value(const TriangleMesh& mesh, const std::array<double, 3>& p, double h);

/// Moller-Trumbore ray-triangle intersection; returns t > 0 hit parameter
/// or a negative value for a miss. Used by the parity test and exposed for
/// oracle checks.
[[nodiscard]] double ray_triangle_intersect(const std::array<double, 3>& origin, const std::array<double, 3>& dir,
                                            const std::array<double, 3>& v0, const std::array<double, 3>& v1,
                                            const std::array<double, 3>& v2, bool* degenerate = nullptr);

}  // namespace ettk::eventmap
