#include "fofkit/reference.hpp"

#include <cmath>
#include <numbers>

#include "../raycast_kernel.hpp"
#include "fofkit/error.hpp"

namespace fofkit::reference {

RaycastResult raycast(const Mesh& mesh, int width, int height) {
  if (width < 1 || height < 1) throw GeometryError("raycast needs a positive image size");
  std::vector<std::vector<Interval>> pixels(static_cast<std::size_t>(width) * height);
  RaycastResult result;
  std::vector<detail::Crossing> crossings;
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      const double px = pixel_x(i, width);
      const double py = pixel_y(j, height);
      crossings.clear();
      detail::Crossing hit;
      for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
        if (detail::intersect_z_ray(mesh, t, px, py, hit)) crossings.push_back(hit);
      }
      if (!crossings.empty()) {
        ++result.audit.hit_pixels;
        result.audit.crossings += crossings.size();
      }
      auto& out = pixels[static_cast<std::size_t>(j) * width + i];
      if (detail::finalize_pixel(crossings, out)) ++result.audit.violations;
    }
  }
  result.image = IntervalImage(width, height, pixels);
  return result;
}

FofGrid intervals_to_fof(const IntervalImage& intervals, int channels) {
  FofGrid fof(intervals.width(), intervals.height(), channels);
  std::vector<double> acc(static_cast<std::size_t>(channels));
  for (int j = 0; j < intervals.height(); ++j) {
    for (int i = 0; i < intervals.width(); ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (const Interval& iv : intervals.at(i, j)) {
        for (int c = 0; c < channels; ++c) {
          const ChannelTerm term = channel_term(c);
          if (term.harmonic == 0) {
            acc[c] += iv.z_out - iv.z_in;
            continue;
          }
          const double w = term.harmonic * std::numbers::pi;
          if (term.sine) {
            acc[c] += (std::cos(w * iv.z_in) - std::cos(w * iv.z_out)) / w;
          } else {
            acc[c] += (std::sin(w * iv.z_out) - std::sin(w * iv.z_in)) / w;
          }
        }
      }
      for (int c = 0; c < channels; ++c) fof.at(i, j, c) = static_cast<float>(acc[c]);
    }
  }
  return fof;
}

OccupancyGrid fof_to_occupancy(const FofGrid& fof, int depth) {
  if (fof.channels() < 1 || depth < 2) throw FormatError("inversion needs C >= 1 and R >= 2");
  OccupancyGrid grid(fof.width(), fof.height(), depth);
  for (int j = 0; j < fof.height(); ++j) {
    for (int i = 0; i < fof.width(); ++i) {
      for (int k = 0; k < depth; ++k) {
        const double z = depth_sample(k, depth);
        double value = 0.0;
        for (int c = 0; c < fof.channels(); ++c) {
          const ChannelTerm term = channel_term(c);
          const double coeff = fof.at(i, j, c);
          if (term.harmonic == 0) {
            value += 0.5 * coeff;
          } else {
            const double angle = term.harmonic * std::numbers::pi * z;
            value += coeff * (term.sine ? std::sin(angle) : std::cos(angle));
          }
        }
        grid.at(i, j, k) = static_cast<float>(value);
      }
    }
  }
  return grid;
}

}  // namespace fofkit::reference
