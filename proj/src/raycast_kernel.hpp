#pragma once

// Per-ray pieces shared by the BVH kernel and the brute-force reference.

#include <algorithm>
#include <cmath>
#include <vector>

#include "fofkit/mesh.hpp"
#include "fofkit/predicates.hpp"
#include "fofkit/raycast.hpp"

namespace fofkit::detail {

struct Crossing {
  double z = 0.0;
  double alignment = 0.0;  // |n_z| / |n|
  std::uint32_t triangle = 0;
};

/// Tests the +z ray through (px, py) against one triangle.
inline bool intersect_z_ray(const Mesh& mesh, std::uint32_t t, double px,
                            double py, Crossing& out) {
  const Triangle& tri = mesh.triangles[t];
  const Vec3& a = mesh.vertices[tri[0]];
  const Vec3& b = mesh.vertices[tri[1]];
  const Vec3& c = mesh.vertices[tri[2]];

  const int s_ab = edge_side(a.x, a.y, b.x, b.y, px, py);
  const int s_bc = edge_side(b.x, b.y, c.x, c.y, px, py);
  if (s_ab == 0 || s_ab != s_bc) return false;
  const int s_ca = edge_side(c.x, c.y, a.x, a.y, px, py);
  if (s_ca != s_ab) return false;

  // Barycentric depth; weights clamped to the hit side.
  auto weight = [&](const Vec3& p, const Vec3& q) {
    const double w = (p.x - px) * (q.y - py) - (p.y - py) * (q.x - px);
    return std::max(0.0, w * s_ab);
  };
  const double wa = weight(b, c);
  const double wb = weight(c, a);
  const double wc = weight(a, b);
  const double sum = wa + wb + wc;
  double z;
  if (sum > 0.0) {
    z = (wa * a.z + wb * b.z + wc * c.z) / sum;
  } else {
    z = (a.z + b.z + c.z) / 3.0;
  }
  z = std::clamp(z, std::min({a.z, b.z, c.z}), std::max({a.z, b.z, c.z}));

  const Vec3 n = cross(b - a, c - a);
  const double len = norm(n);
  out.z = z;
  out.alignment = len > 0.0 ? std::fabs(n.z) / len : 0.0;
  out.triangle = t;
  return true;
}

/// Sorts crossings, repairs odd parity by dropping the most tangent hit,
/// pairs them in depth order, clips to [-1, 1] and merges touching spans.
/// Returns true when a repair was needed.
inline bool finalize_pixel(std::vector<Crossing>& crossings,
                           std::vector<Interval>& out) {
  std::sort(crossings.begin(), crossings.end(),
            [](const Crossing& l, const Crossing& r) {
              return l.z < r.z || (l.z == r.z && l.triangle < r.triangle);
            });
  bool repaired = false;
  if (crossings.size() % 2 == 1) {
    repaired = true;
    std::size_t drop = 0;
    for (std::size_t k = 1; k < crossings.size(); ++k) {
      if (crossings[k].alignment < crossings[drop].alignment) drop = k;
    }
    crossings.erase(crossings.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
    const double lo = std::max(crossings[k].z, -1.0);
    const double hi = std::min(crossings[k + 1].z, 1.0);
    if (!(lo < hi)) continue;
    if (!out.empty() && lo <= out.back().z_out) {
      out.back().z_out = std::max(out.back().z_out, hi);
    } else {
      out.push_back({lo, hi});
    }
  }
  return repaired;
}

}  // namespace fofkit::detail
