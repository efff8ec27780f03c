#include "fofkit/metrics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fofkit/bvh.hpp"
#include "fofkit/error.hpp"

namespace fofkit {

std::vector<Vec3> sample_surface(const Mesh& mesh, std::size_t count, std::uint64_t seed) {
  if (mesh.empty()) throw GeometryError("cannot sample an empty mesh");
  std::vector<double> cdf(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += triangle_area(mesh, t);
    cdf[t] = total;
  }
  if (!(total > 0.0)) throw GeometryError("mesh has zero surface area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec3> points;
  points.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double u = (static_cast<double>(s) + unit(rng)) / static_cast<double>(count) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t t =
        std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    const Triangle& tri = mesh.triangles[t];
    const double r1 = std::sqrt(unit(rng));
    const double r2 = unit(rng);
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    points.push_back(a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2));
  }
  return points;
}

namespace {

double mean_distance(const std::vector<Vec3>& points, const Bvh& target) {
  std::vector<double> dist(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    dist[static_cast<std::size_t>(s)] =
        std::sqrt(target.closest_point(points[static_cast<std::size_t>(s)]).squared_distance);
  }
  double sum = 0.0;
  for (double d : dist) sum += d;
  return sum / static_cast<double>(points.size());
}

}  // namespace

double chamfer(const Mesh& a, const Mesh& b, std::size_t samples, std::uint64_t seed) {
  if (a.empty() || b.empty()) throw GeometryError("chamfer needs two non-empty meshes");
  if (samples == 0) throw GeometryError("chamfer needs at least one sample");
  const Bvh tree_a(a);
  const Bvh tree_b(b);
  const std::vector<Vec3> from_a = sample_surface(a, samples, seed);
  const std::vector<Vec3> from_b = sample_surface(b, samples, seed ^ 0x9e3779b97f4a7c15ULL);
  return mean_distance(from_a, tree_b) + mean_distance(from_b, tree_a);
}

std::size_t count_inside(const OccupancyGrid& grid, double iso) {
  const float iso_f = static_cast<float>(iso);
  std::size_t count = 0;
  for (float v : grid.data()) count += v >= iso_f;
  return count;
}

double grid_iou(const OccupancyGrid& a, const OccupancyGrid& b, double iso) {
  if (a.width() != b.width() || a.height() != b.height() || a.depth() != b.depth()) {
    throw FormatError("grid_iou shape mismatch");
  }
  const float iso_f = static_cast<float>(iso);
  const auto da = a.data();
  const auto db = b.data();
  std::size_t both = 0;
  std::size_t either = 0;
  const auto n = static_cast<std::ptrdiff_t>(da.size());
#pragma omp parallel for reduction(+ : both, either) schedule(static)
  for (std::ptrdiff_t v = 0; v < n; ++v) {
    const bool ia = da[static_cast<std::size_t>(v)] >= iso_f;
    const bool ib = db[static_cast<std::size_t>(v)] >= iso_f;
    both += ia && ib;
    either += ia || ib;
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

double interval_iou(const IntervalImage& a, const IntervalImage& b, int depth) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw FormatError("interval_iou shape mismatch");
  }
  if (depth < 1) throw FormatError("interval_iou needs a positive depth");
  std::size_t both = 0;
  std::size_t either = 0;
#pragma omp parallel reduction(+ : both, either)
  {
    std::vector<std::uint8_t> column(static_cast<std::size_t>(depth));
    auto mark = [&](std::span<const Interval> pixel, std::uint8_t bit) {
      for (const Interval& iv : pixel) {
        int k = std::max(0, static_cast<int>(std::ceil((iv.z_in + 1.0) * depth / 2.0 - 0.5)) - 1);
        for (; k < depth; ++k) {
          const double z = depth_sample(k, depth);
          if (z > iv.z_out) break;
          if (z >= iv.z_in) column[static_cast<std::size_t>(k)] |= bit;
        }
      }
    };
#pragma omp for schedule(dynamic, 8)
    for (int j = 0; j < a.height(); ++j) {
      for (int i = 0; i < a.width(); ++i) {
        const auto pa = a.at(i, j);
        const auto pb = b.at(i, j);
        if (pa.empty() && pb.empty()) continue;
        std::fill(column.begin(), column.end(), 0);
        mark(pa, 1);
        mark(pb, 2);
        for (std::uint8_t v : column) {
          both += v == 3;
          either += v != 0;
        }
      }
    }
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace fofkit
