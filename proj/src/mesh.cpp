#include "fofkit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "fofkit/error.hpp"

namespace fofkit {

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::unordered_map<std::uint64_t, std::uint32_t> edge_counts(const Mesh& mesh) {
  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  counts.reserve(mesh.triangles.size() * 2);
  for (const Triangle& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) ++counts[edge_key(t[e], t[(e + 1) % 3])];
  }
  return counts;
}

}  // namespace

NormalizeResult normalize_mesh(const Mesh& mesh, double margin) {
  if (mesh.vertices.empty() || mesh.triangles.empty()) {
    throw GeometryError("cannot normalize an empty mesh");
  }
  if (!(margin >= 0.0 && margin < 1.0)) {
    throw GeometryError("margin must lie in [0, 1)");
  }
  Vec3 lo = mesh.vertices.front();
  Vec3 hi = lo;
  for (const Vec3& v : mesh.vertices) {
    lo = component_min(lo, v);
    hi = component_max(hi, v);
  }
  const Vec3 extent = hi - lo;
  const double largest = std::max({extent.x, extent.y, extent.z});
  if (!(largest > 0.0) || !std::isfinite(largest)) {
    throw GeometryError("mesh has zero extent");
  }

  NormalizeResult out;
  out.frame.offset = (lo + hi) * 0.5;
  out.frame.scale = 2.0 * (1.0 - margin) / largest;
  out.mesh.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) {
    out.mesh.vertices.push_back(out.frame.to_normalized(v));
  }
  out.mesh.triangles.reserve(mesh.triangles.size());
  for (const Triangle& t : mesh.triangles) {
    const Vec3& a = out.mesh.vertices[t[0]];
    const Vec3& b = out.mesh.vertices[t[1]];
    const Vec3& c = out.mesh.vertices[t[2]];
    if (0.5 * norm(cross(b - a, c - a)) <= kDegenerateArea) {
      ++out.dropped_degenerate;
      continue;
    }
    out.mesh.triangles.push_back(t);
  }
  out.mesh.watertight = out.dropped_degenerate == 0
                            ? mesh.watertight
                            : count_nonmanifold_edges(out.mesh) == 0;
  return out;
}

Mesh denormalize_mesh(const Mesh& mesh, const NormalizedFrame& frame) {
  Mesh out = mesh;
  for (Vec3& v : out.vertices) v = frame.to_raw(v);
  return out;
}

Vec3 rotate_yaw(const Vec3& p, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {p.x * c + p.z * s, p.y, -p.x * s + p.z * c};
}

Mesh rotate_yaw(const Mesh& mesh, double theta) {
  Mesh out = mesh;
  if (theta == 0.0) return out;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (Vec3& v : out.vertices) {
    v = {v.x * c + v.z * s, v.y, -v.x * s + v.z * c};
  }
  return out;
}

std::size_t count_nonmanifold_edges(const Mesh& mesh) {
  std::size_t bad = 0;
  for (const auto& [key, count] : edge_counts(mesh)) {
    if (count != 2) ++bad;
  }
  return bad;
}

long euler_characteristic(const Mesh& mesh) {
  std::unordered_set<std::uint32_t> used;
  for (const Triangle& t : mesh.triangles) used.insert(t.begin(), t.end());
  const long v = static_cast<long>(used.size());
  const long e = static_cast<long>(edge_counts(mesh).size());
  const long f = static_cast<long>(mesh.triangles.size());
  return v - e + f;
}

double mesh_volume(const Mesh& mesh) {
  double six_v = 0.0;
  for (const Triangle& t : mesh.triangles) {
    six_v += dot(mesh.vertices[t[0]],
                 cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
  }
  return six_v / 6.0;
}

double triangle_area(const Mesh& mesh, std::size_t t) {
  const Triangle& tri = mesh.triangles[t];
  const Vec3& a = mesh.vertices[tri[0]];
  return 0.5 * norm(cross(mesh.vertices[tri[1]] - a, mesh.vertices[tri[2]] - a));
}

double surface_area(const Mesh& mesh) {
  double area = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    area += triangle_area(mesh, t);
  }
  return area;
}

}  // namespace fofkit
