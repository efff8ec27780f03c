#include "fofkit/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "fofkit/error.hpp"

namespace fofkit {

Mesh make_box(const Vec3& lo, const Vec3& hi) {
  Mesh m;
  for (int k = 0; k < 8; ++k) {
    m.vertices.push_back({(k & 1) ? hi.x : lo.x, (k & 2) ? hi.y : lo.y,
                          (k & 4) ? hi.z : lo.z});
  }
  // Two triangles per face, counter-clockwise seen from outside.
  m.triangles = {{0, 2, 1}, {1, 2, 3},   // z = lo
                 {4, 5, 6}, {5, 7, 6},   // z = hi
                 {0, 1, 4}, {1, 5, 4},   // y = lo
                 {2, 6, 3}, {3, 6, 7},   // y = hi
                 {0, 4, 2}, {2, 4, 6},   // x = lo
                 {1, 3, 5}, {3, 7, 5}};  // x = hi
  m.watertight = true;
  return m;
}

Mesh make_icosphere(const Vec3& center, double radius, int subdivisions) {
  if (subdivisions < 0 || subdivisions > 9) {
    throw GeometryError("icosphere subdivisions must lie in [0, 9]");
  }
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> dirs = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                            {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                            {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& d : dirs) d = normalized(d);
  std::vector<Triangle> tris = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      dirs.push_back(normalized(dirs[a] + dirs[b]));
      const auto id = static_cast<std::uint32_t>(dirs.size() - 1);
      midpoints.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(tris.size() * 4);
    for (const Triangle& tri : tris) {
      const std::uint32_t ab = midpoint(tri[0], tri[1]);
      const std::uint32_t bc = midpoint(tri[1], tri[2]);
      const std::uint32_t ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }

  Mesh m;
  m.vertices.reserve(dirs.size());
  for (const Vec3& d : dirs) m.vertices.push_back(center + d * radius);
  m.triangles = std::move(tris);
  m.watertight = true;
  return m;
}

Mesh make_torus(const Vec3& center, double major_radius, double minor_radius,
                int major_segments, int minor_segments) {
  if (major_segments < 3 || minor_segments < 3) {
    throw GeometryError("torus needs at least 3 segments per direction");
  }
  Mesh m;
  m.vertices.reserve(static_cast<std::size_t>(major_segments) * minor_segments);
  for (int u = 0; u < major_segments; ++u) {
    const double phi = 2.0 * std::numbers::pi * u / major_segments;
    for (int v = 0; v < minor_segments; ++v) {
      const double psi = 2.0 * std::numbers::pi * v / minor_segments;
      const double ring = major_radius + minor_radius * std::cos(psi);
      m.vertices.push_back(center + Vec3{ring * std::cos(phi),
                                         minor_radius * std::sin(psi),
                                         ring * std::sin(phi)});
    }
  }
  auto id = [&](int u, int v) {
    return static_cast<std::uint32_t>((u % major_segments) * minor_segments +
                                      (v % minor_segments));
  };
  for (int u = 0; u < major_segments; ++u) {
    for (int v = 0; v < minor_segments; ++v) {
      m.triangles.push_back({id(u, v), id(u, v + 1), id(u + 1, v)});
      m.triangles.push_back({id(u + 1, v), id(u, v + 1), id(u + 1, v + 1)});
    }
  }
  m.watertight = true;
  return m;
}

}  // namespace fofkit
