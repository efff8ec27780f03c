#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fofkit/mesh.hpp"

namespace fofkit {

struct Aabb {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};

  void extend(const Vec3& p) {
    lo = component_min(lo, p);
    hi = component_max(hi, p);
  }
  void extend(const Aabb& b) {
    lo = component_min(lo, b.lo);
    hi = component_max(hi, b.hi);
  }
  bool contains_xy(double x, double y) const {
    return x >= lo.x && x <= hi.x && y >= lo.y && y <= hi.y;
  }
  double squared_distance(const Vec3& p) const;
};

/// Binary bounding volume hierarchy over a mesh's triangles. Construction is
/// a median split on the longest centroid axis with ties ordered by triangle
/// index, so the tree depends only on the input order.
class Bvh {
 public:
  struct Node {
    Aabb box;
    // Leaf: [first, first + count) into triangle_order(). Inner: children
    // at `first` and `first + 1`.
    std::uint32_t first = 0;
    std::uint32_t count = 0;
  };

  /// `xy_only` restricts splits to x and y, which suits +z ray queries.
  explicit Bvh(const Mesh& mesh, std::uint32_t leaf_size = 4,
               bool xy_only = false);

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const std::uint32_t> triangle_order() const { return order_; }
  const Mesh& mesh() const { return *mesh_; }

  /// Visits every triangle whose leaf box contains (x, y) in projection.
  template <typename Fn>
  void for_each_xy_candidate(double x, double y, Fn&& fn) const {
    if (nodes_.empty()) return;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!node.box.contains_xy(x, y)) continue;
      if (node.count > 0) {
        for (std::uint32_t k = 0; k < node.count; ++k) fn(order_[node.first + k]);
      } else {
        stack[top++] = node.first + 1;
        stack[top++] = node.first;
      }
    }
  }

  struct ClosestPoint {
    Vec3 point;
    double squared_distance = 0.0;
    std::uint32_t triangle = 0;
  };
  ClosestPoint closest_point(const Vec3& p) const;

 private:
  std::uint32_t build(std::uint32_t node, std::uint32_t begin,
                      std::uint32_t end, std::vector<Vec3>& centroids,
                      std::vector<Aabb>& boxes);

  const Mesh* mesh_;
  std::uint32_t leaf_size_;
  bool xy_only_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

/// Closest point on triangle abc to p.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c);

}  // namespace fofkit
