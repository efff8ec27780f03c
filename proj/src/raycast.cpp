#include "fofkit/raycast.hpp"

#include <omp.h>

#include <optional>
#include <string>

#include "fofkit/bvh.hpp"
#include "fofkit/error.hpp"
#include "raycast_kernel.hpp"

namespace fofkit {

IntervalImage::IntervalImage(int width, int height)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) throw FormatError("image dimensions must be positive");
  offsets_.assign(pixel_count() + 1, 0);
}

IntervalImage::IntervalImage(int width, int height,
                             const std::vector<std::vector<Interval>>& pixels)
    : IntervalImage(width, height) {
  if (pixels.size() != pixel_count()) {
    throw FormatError("pixel list count does not match image size");
  }
  for (std::size_t p = 0; p < pixels.size(); ++p) {
    double prev = -2.0;
    for (const Interval& iv : pixels[p]) {
      if (!(iv.z_in >= -1.0 && iv.z_in < iv.z_out && iv.z_out <= 1.0) ||
          !(iv.z_in > prev)) {
        throw FormatError("intervals must be sorted, disjoint and inside [-1, 1]");
      }
      prev = iv.z_out;
      intervals_.push_back(iv);
    }
    offsets_[p + 1] = static_cast<std::uint32_t>(intervals_.size());
  }
}

IntervalImage::IntervalImage(int width, int height,
                             std::vector<std::uint32_t> offsets,
                             std::vector<Interval> intervals)
    : width_(width),
      height_(height),
      offsets_(std::move(offsets)),
      intervals_(std::move(intervals)) {
  if (offsets_.size() != pixel_count() + 1 ||
      offsets_.back() != intervals_.size()) {
    throw FormatError("interval offsets do not match the interval list");
  }
}

std::span<const Interval> IntervalImage::at(int i, int j) const {
  const std::size_t p = static_cast<std::size_t>(j) * width_ + i;
  return {intervals_.data() + offsets_[p], intervals_.data() + offsets_[p + 1]};
}

double IntervalImage::total_length() const {
  double total = 0.0;
  for (const Interval& iv : intervals_) total += iv.z_out - iv.z_in;
  return total;
}

RaycastResult raycast(const Mesh& mesh, int width, int height,
                      const RaycastOptions& options) {
  if (width < 1 || height < 1) throw GeometryError("raycast needs a positive image size");

  std::optional<Bvh> bvh;
  if (!options.brute_force) bvh.emplace(mesh, 4, true);

  std::vector<std::vector<Interval>> rows(static_cast<std::size_t>(height));
  std::vector<std::vector<std::uint32_t>> row_counts(static_cast<std::size_t>(height));
  std::vector<ParityAudit> row_audit(static_cast<std::size_t>(height));
  const auto tri_count = static_cast<std::uint32_t>(mesh.triangles.size());

#pragma omp parallel if (!options.brute_force)
  {
    std::vector<detail::Crossing> crossings;
    std::vector<Interval> pixel;
#pragma omp for schedule(dynamic, 4)
    for (int j = 0; j < height; ++j) {
      const double py = pixel_y(j, height);
      auto& out = rows[j];
      auto& counts = row_counts[j];
      auto& audit = row_audit[j];
      counts.resize(static_cast<std::size_t>(width));
      for (int i = 0; i < width; ++i) {
        const double px = pixel_x(i, width);
        crossings.clear();
        detail::Crossing hit;
        if (bvh) {
          bvh->for_each_xy_candidate(px, py, [&](std::uint32_t t) {
            if (detail::intersect_z_ray(mesh, t, px, py, hit)) crossings.push_back(hit);
          });
        } else {
          for (std::uint32_t t = 0; t < tri_count; ++t) {
            if (detail::intersect_z_ray(mesh, t, px, py, hit)) crossings.push_back(hit);
          }
        }
        if (!crossings.empty()) {
          ++audit.hit_pixels;
          audit.crossings += crossings.size();
        }
        pixel.clear();
        if (detail::finalize_pixel(crossings, pixel)) ++audit.violations;
        counts[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(pixel.size());
        out.insert(out.end(), pixel.begin(), pixel.end());
      }
    }
  }

  RaycastResult result;
  std::vector<std::uint32_t> offsets;
  offsets.reserve(static_cast<std::size_t>(width) * height + 1);
  offsets.push_back(0);
  std::vector<Interval> intervals;
  for (int j = 0; j < height; ++j) {
    for (std::uint32_t c : row_counts[j]) offsets.push_back(offsets.back() + c);
    intervals.insert(intervals.end(), rows[j].begin(), rows[j].end());
    result.audit.hit_pixels += row_audit[j].hit_pixels;
    result.audit.violations += row_audit[j].violations;
    result.audit.crossings += row_audit[j].crossings;
  }
  result.image = IntervalImage(width, height, std::move(offsets), std::move(intervals));

  if (options.require_watertight &&
      static_cast<double>(result.audit.violations) >
          options.max_violation_fraction * static_cast<double>(result.audit.hit_pixels)) {
    throw GeometryError("mesh not watertight under probe: " +
                        std::to_string(result.audit.violations) + " of " +
                        std::to_string(result.audit.hit_pixels) +
                        " hit pixels have odd crossing parity");
  }
  return result;
}

IntervalImage raycast_intervals(const Mesh& mesh, int width, int height) {
  RaycastOptions options;
  options.require_watertight = mesh.watertight;
  return raycast(mesh, width, height, options).image;
}

std::vector<double> ray_crossings(const Mesh& mesh, double x, double y) {
  std::vector<double> zs;
  detail::Crossing hit;
  for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
    if (detail::intersect_z_ray(mesh, t, x, y, hit)) zs.push_back(hit.z);
  }
  std::sort(zs.begin(), zs.end());
  return zs;
}

}  // namespace fofkit
