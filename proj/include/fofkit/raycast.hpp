#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fofkit/mesh.hpp"

namespace fofkit {

struct Interval {
  double z_in = 0.0;
  double z_out = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Per-pixel sorted, disjoint occupancy intervals along depth, stored in
/// compressed rows: pixel p = j * width + i owns
/// intervals()[offsets()[p] .. offsets()[p + 1]).
class IntervalImage {
 public:
  IntervalImage() = default;
  IntervalImage(int width, int height);
  /// Takes per-pixel lists in row-major order; validates the invariants
  /// (sorted, disjoint, inside [-1, 1], z_in < z_out).
  IntervalImage(int width, int height,
                const std::vector<std::vector<Interval>>& pixels);
  IntervalImage(int width, int height, std::vector<std::uint32_t> offsets,
                std::vector<Interval> intervals);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::span<const Interval> at(int i, int j) const;
  std::span<const Interval> intervals() const { return intervals_; }
  std::span<const std::uint32_t> offsets() const { return offsets_; }

  /// Sum over pixels of occupied length.
  double total_length() const;

  friend bool operator==(const IntervalImage&, const IntervalImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> offsets_;
  std::vector<Interval> intervals_;
};

/// Pixel-center coordinates of the canonical image grid (row 0 at top).
inline double pixel_x(int i, int width) {
  return -1.0 + (2.0 * i + 1.0) / width;
}
inline double pixel_y(int j, int height) {
  return 1.0 - (2.0 * j + 1.0) / height;
}

struct RaycastOptions {
  /// Fail when more than 0.1% of hit pixels need parity repair.
  bool require_watertight = false;
  double max_violation_fraction = 1e-3;
  /// Use the brute-force triangle loop instead of the BVH (serial).
  bool brute_force = false;
};

struct ParityAudit {
  std::size_t hit_pixels = 0;
  std::size_t violations = 0;
  std::size_t crossings = 0;
};

struct RaycastResult {
  IntervalImage image;
  ParityAudit audit;
};

/// One orthographic +z ray per pixel center. Crossings are classified with
/// exact, tie-broken edge predicates so shared edges and vertices are counted
/// once. Odd crossing counts drop the most tangent hit; crossings are then
/// paired in depth order and clipped to [-1, 1].
RaycastResult raycast(const Mesh& mesh, int width, int height,
                      const RaycastOptions& options = {});

/// raycast() with require_watertight taken from mesh.watertight.
IntervalImage raycast_intervals(const Mesh& mesh, int width, int height);

/// One ray at an arbitrary (x, y); no parity repair. Returns sorted crossing
/// depths.
std::vector<double> ray_crossings(const Mesh& mesh, double x, double y);

}  // namespace fofkit
