#include "ettk/eventmap/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace ettk::eventmap {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Exact-coordinate vertex welding for soup formats (STL).
struct VertexWelder {
  std::map<std::array<double, 3>, int> index;
  TriangleMesh* mesh;
  int add(const Vec3& v) {
    auto [it, inserted] = index.try_emplace(v, static_cast<int>(mesh->vertices.size()));
    if (inserted) mesh->vertices.push_back(v);
    return it->second;
  }
};

TriangleMesh load_stl_binary(std::ifstream& in, const std::string& path) {
  in.seekg(80, std::ios::beg);
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 4);
  if (!in) throw config_error("load_mesh: truncated binary STL header in '" + path + "'");
  TriangleMesh mesh;
  VertexWelder weld{{}, &mesh};
  for (std::uint32_t t = 0; t < count; ++t) {
    float buf[12];
    in.read(reinterpret_cast<char*>(buf), 48);
    std::uint16_t attr = 0;
    in.read(reinterpret_cast<char*>(&attr), 2);
    if (!in) throw config_error("load_mesh: truncated binary STL facet in '" + path + "'");
    std::array<int, 3> tri{};
    for (int v = 0; v < 3; ++v) {
      const Vec3 p{static_cast<double>(buf[3 + 3 * v]), static_cast<double>(buf[4 + 3 * v]),
                   static_cast<double>(buf[5 + 3 * v])};
      tri[static_cast<std::size_t>(v)] = weld.add(p);
    }
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

TriangleMesh load_stl_ascii(std::ifstream& in, const std::string& path) {
  TriangleMesh mesh;
  VertexWelder weld{{}, &mesh};
  std::string tok;
  std::vector<int> tri;
  while (in >> tok) {
    if (tok == "vertex") {
      Vec3 p;
      if (!(in >> p[0] >> p[1] >> p[2]))
        throw config_error("load_mesh: malformed vertex in ASCII STL '" + path + "'");
      tri.push_back(weld.add(p));
      if (tri.size() == 3) {
        mesh.triangles.push_back({tri[0], tri[1], tri[2]});
        tri.clear();
      }
    }
  }
  if (!tri.empty()) throw config_error("load_mesh: dangling vertices in ASCII STL '" + path + "'");
  return mesh;
}

TriangleMesh load_obj(std::ifstream& in, const std::string& path) {
  TriangleMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p[0] >> p[1] >> p[2])) throw config_error("load_mesh: malformed 'v' line in '" + path + "'");
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string ref;
      while (ls >> ref) {
        // "i", "i/t", "i/t/n", "i//n" forms; only the vertex index is used.
        const std::size_t slash = ref.find('/');
        const std::string head = (slash == std::string::npos) ? ref : ref.substr(0, slash);
        int i = 0;
        try {
          i = std::stoi(head);
        } catch (...) {
          throw config_error("load_mesh: malformed face reference '" + ref + "' in '" + path + "'");
        }
        if (i < 0) i = static_cast<int>(mesh.vertices.size()) + i + 1;  // negative = relative
        if (i < 1 || i > static_cast<int>(mesh.vertices.size()))
          throw config_error("load_mesh: face index " + std::to_string(i) + " out of range in '" + path + "'");
        idx.push_back(i - 1);
      }
      if (idx.size() < 3) throw config_error("load_mesh: face with fewer than 3 vertices in '" + path + "'");
      // Fan-triangulate convex polygons.
      for (std::size_t k = 1; k + 1 < idx.size(); ++k)
        mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
    }
  }
  return mesh;
}

}  // namespace

TriangleMesh load_mesh(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("load_mesh: cannot open '" + path + "'");
  TriangleMesh mesh;
  auto ends_with = [&](const char* suffix) {
    const std::string s(suffix);
    return path.size() >= s.size() &&
           std::equal(s.rbegin(), s.rend(), path.rbegin(), [](char a, char b) { return std::tolower(b) == a; });
  };
  if (ends_with(".obj")) {
    mesh = load_obj(in, path);
  } else if (ends_with(".stl")) {
    // ASCII files start with "solid" AND contain "facet"; some binary
    // exporters also write "solid", so verify the facet-count arithmetic.
    std::array<char, 6> head{};
    in.read(head.data(), 5);
    in.seekg(0, std::ios::end);
    const auto fsize = static_cast<std::uint64_t>(in.tellg());
    in.clear();
    in.seekg(0, std::ios::beg);
    bool ascii = std::strncmp(head.data(), "solid", 5) == 0;
    if (ascii && fsize >= 84) {
      std::uint32_t count = 0;
      in.seekg(80, std::ios::beg);
      in.read(reinterpret_cast<char*>(&count), 4);
      in.clear();
      in.seekg(0, std::ios::beg);
      if (84ULL + 50ULL * count == fsize) ascii = false;
    }
    mesh = ascii ? load_stl_ascii(in, path) : load_stl_binary(in, path);
  } else {
    throw config_error("load_mesh: unsupported extension on '" + path + "' (expected .stl or .obj)");
  }
  if (mesh.triangles.empty()) throw config_error("load_mesh: no triangles in '" + path + "'");
  for (const auto& t : mesh.triangles)
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw config_error("load_mesh: degenerate triangle (repeated vertex) in '" + path + "'");
  return mesh;
}

void validate_watertight(const TriangleMesh& mesh) {
  if (mesh.triangles.empty()) throw config_error("validate_watertight: empty mesh");
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[static_cast<std::size_t>(e)];
      const int b = t[static_cast<std::size_t>((e + 1) % 3)];
      if (++directed[{a, b}] > 1)
        throw config_error("validate_watertight: directed edge (" + std::to_string(a) + "," + std::to_string(b) +
                           ") appears more than once (non-manifold or inconsistently wound)");
    }
  }
  for (const auto& [edge, count] : directed) {
    if (directed.find({edge.second, edge.first}) == directed.end())
      throw config_error("validate_watertight: boundary edge (" + std::to_string(edge.first) + "," +
                         std::to_string(edge.second) + ") has no opposite (surface not closed)");
  }
}

double ray_triangle_intersect(const Vec3& origin, const Vec3& dir, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                              bool* degenerate) {
  constexpr double kEps = 1e-12;
  if (degenerate != nullptr) *degenerate = false;
  const Vec3 e1 = sub(v1, v0);
  const Vec3 e2 = sub(v2, v0);
  const Vec3 pvec = cross(dir, e2);
  const double det = dot(e1, pvec);
  if (std::abs(det) < kEps) {
    if (degenerate != nullptr) *degenerate = true;
    return -1.0;
  }
  const double inv_det = 1.0 / det;
  const Vec3 tvec = sub(origin, v0);
  const double u = dot(tvec, pvec) * inv_det;
  if (u < 0.0 || u > 1.0) return -1.0;
  const Vec3 qvec = cross(tvec, e1);
  const double v = dot(dir, qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) return -1.0;
  // Barycentric hits near an edge or vertex make the parity count fragile.
  constexpr double kEdgeEps = 1e-9;
  if (degenerate != nullptr &&
      (u < kEdgeEps || v < kEdgeEps || u + v > 1.0 - kEdgeEps))
    *degenerate = true;
  return dot(e2, qvec) * inv_det;
}

bool point_in_mesh(const TriangleMesh& mesh, const Vec3& p) {
  constexpr int kMaxAttempts = 32;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double golden = 2.399963229728653;
    const double frac = attempt * 0.6180339887498949 + 0.37;
    const double z = 1.0 - 2.0 * (frac - std::floor(frac));
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * attempt + 0.5;
    const Vec3 dir{r * std::cos(a), r * std::sin(a), z};
    int crossings = 0;
    bool bad = false;
    for (const auto& t : mesh.triangles) {
      bool degen = false;
      const double hit = ray_triangle_intersect(p, dir, mesh.vertices[static_cast<std::size_t>(t[0])],
                                                mesh.vertices[static_cast<std::size_t>(t[1])],
                                                mesh.vertices[static_cast<std::size_t>(t[2])], &degen);
      if (hit > 1e-12) {
        if (degen) {
          bad = true;
          break;
        }
        ++crossings;
      } else if (degen && hit > -1e-12) {
        // Near-zero or edge-touching hit: parity unreliable.
        bad = true;
        break;
      }
    }
    if (!bad) return (crossings % 2) == 1;
  }
  throw numerical_error("point_in_mesh: no non-degenerate ray direction found (point on or near the surface?)");
}

double mesh_distance(const TriangleMesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(t[2])];
    // Closest point on triangle (Voronoi-region walk).
    const Vec3 ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    Vec3 q;
    if (d1 <= 0.0 && d2 <= 0.0) {
      q = a;
    } else {
      const Vec3 bp = sub(p, b);
      const double d3 = dot(ab, bp), d4 = dot(ac, bp);
      if (d3 >= 0.0 && d4 <= d3) {
        q = b;
      } else {
        const Vec3 cp = sub(p, c);
        const double d5 = dot(ab, cp), d6 = dot(ac, cp);
        if (d6 >= 0.0 && d5 <= d6) {
          q = c;
        } else {
          const double vc = d1 * d4 - d3 * d2;
          if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
            const double v = d1 / (d1 - d3);
            q = {a[0] + v * ab[0], a[1] + v * ab[1], a[2] + v * ab[2]};
          } else {
            const double vb = d5 * d2 - d1 * d6;
            if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
              const double w = d2 / (d2 - d6);
              q = {a[0] + w * ac[0], a[1] + w * ac[1], a[2] + w * ac[2]};
            } else {
              const double va = d3 * d6 - d5 * d4;
              if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
                const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
                q = {b[0] + w * (c[0] - b[0]), b[1] + w * (c[1] - b[1]), b[2] + w * (c[2] - b[2])};
              } else {
                const double denom = 1.0 / (va + vb + vc);
                const double v = vb * denom, w = vc * denom;
                q = {a[0] + ab[0] * v + ac[0] * w, a[1] + ab[1] * v + ac[1] * w, a[2] + ab[2] * v + ac[2] * w};
              }
            }
          }
        }
      }
    }
    best = std::min(best, norm(sub(p, q)));
  }
  return best;
}

double signed_boundary_value(const TriangleMesh& mesh, const Vec3& p, double h) {
  const double d = mesh_distance(mesh, p);
  const double s = point_in_mesh(mesh, p) ? -1.0 : 1.0;
  return s * d - h;
}

}  // namespace ettk::eventmap
