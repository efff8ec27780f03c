#include "fofkit/bvh.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace fofkit {

double Aabb::squared_distance(const Vec3& p) const {
  const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
  const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
  const double dz = std::max({lo.z - p.z, 0.0, p.z - hi.z});
  return dx * dx + dy * dy + dz * dz;
}

Bvh::Bvh(const Mesh& mesh, std::uint32_t leaf_size, bool xy_only)
    : mesh_(&mesh),
      leaf_size_(std::max<std::uint32_t>(leaf_size, 1)),
      xy_only_(xy_only) {
  const auto n = static_cast<std::uint32_t>(mesh.triangles.size());
  if (n == 0) return;
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  std::vector<Vec3> centroids(n);
  std::vector<Aabb> boxes(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    const Triangle& tri = mesh.triangles[t];
    for (std::uint32_t v : tri) boxes[t].extend(mesh.vertices[v]);
    centroids[t] = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] +
                    mesh.vertices[tri[2]]) *
                   (1.0 / 3.0);
  }
  nodes_.reserve(2 * (n / leaf_size_ + 1));
  nodes_.emplace_back();
  build(0, 0, n, centroids, boxes);
}

std::uint32_t Bvh::build(std::uint32_t node, std::uint32_t begin,
                         std::uint32_t end, std::vector<Vec3>& centroids,
                         std::vector<Aabb>& boxes) {
  Aabb box;
  Aabb centroid_box;
  for (std::uint32_t k = begin; k < end; ++k) {
    box.extend(boxes[order_[k]]);
    centroid_box.extend(centroids[order_[k]]);
  }
  nodes_[node].box = box;
  if (end - begin <= leaf_size_) {
    nodes_[node].first = begin;
    nodes_[node].count = end - begin;
    return node;
  }

  const Vec3 extent = centroid_box.hi - centroid_box.lo;
  int axis = 0;
  if (extent.y > extent.x) axis = 1;
  if (!xy_only_ && extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;
  auto key = [&](std::uint32_t t) {
    const Vec3& c = centroids[t];
    return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
  };
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                     const double ka = key(a);
                     const double kb = key(b);
                     return ka < kb || (ka == kb && a < b);
                   });

  const auto left = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_.emplace_back();
  nodes_[node].first = left;
  nodes_[node].count = 0;
  build(left, begin, mid, centroids, boxes);
  build(left + 1, mid, end, centroids, boxes);
  return node;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection 5.1.5).
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    return a + ab * (d1 / (d1 - d3));
  }

  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    return a + ac * (d2 / (d2 - d6));
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }

  const double denom = va + vb + vc;
  if (denom == 0.0) {
    // Degenerate triangle; fall back to the nearest vertex.
    const double da = dot(ap, ap), db = dot(bp, bp), dc = dot(cp, cp);
    return da <= db && da <= dc ? a : (db <= dc ? b : c);
  }
  const double v = vb / denom;
  const double w = vc / denom;
  return a + ab * v + ac * w;
}

Bvh::ClosestPoint Bvh::closest_point(const Vec3& p) const {
  ClosestPoint best;
  best.squared_distance = std::numeric_limits<double>::infinity();
  if (nodes_.empty()) return best;

  struct Entry {
    double d2;
    std::uint32_t node;
    bool operator>(const Entry& o) const {
      return d2 > o.d2 || (d2 == o.d2 && node > o.node);
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.push({nodes_[0].box.squared_distance(p), 0});
  while (!queue.empty()) {
    const Entry e = queue.top();
    queue.pop();
    if (e.d2 > best.squared_distance) break;
    const Node& node = nodes_[e.node];
    if (node.count > 0) {
      for (std::uint32_t k = 0; k < node.count; ++k) {
        const std::uint32_t t = order_[node.first + k];
        const Triangle& tri = mesh_->triangles[t];
        const Vec3 q = closest_point_on_triangle(
            p, mesh_->vertices[tri[0]], mesh_->vertices[tri[1]],
            mesh_->vertices[tri[2]]);
        const Vec3 d = q - p;
        const double d2 = dot(d, d);
        if (d2 < best.squared_distance ||
            (d2 == best.squared_distance && t < best.triangle)) {
          best = {q, d2, t};
        }
      }
      continue;
    }
    for (std::uint32_t child = node.first; child < node.first + 2; ++child) {
      const double d2 = nodes_[child].box.squared_distance(p);
      if (d2 <= best.squared_distance) queue.push({d2, child});
    }
  }
  return best;
}

}  // namespace fofkit
