#include "fofkit/fof.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <string>

#include "fofkit/error.hpp"

namespace fofkit {

namespace {

void require_positive(int width, int height, int third, const char* what) {
  if (width < 1 || height < 1 || third < 1) {
    throw FormatError(std::string(what) + " dimensions must be positive");
  }
}

}  // namespace

FofGrid::FofGrid(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  require_positive(width, height, channels, "FOF grid");
  data_.assign(static_cast<std::size_t>(width) * height * channels, 0.0f);
}

FofGrid::FofGrid(int width, int height, int channels, std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  require_positive(width, height, channels, "FOF grid");
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw FormatError("FOF data size does not match its shape");
  }
}

OccupancyGrid::OccupancyGrid(int width, int height, int depth, float fill)
    : width_(width), height_(height), depth_(depth) {
  require_positive(width, height, depth, "occupancy grid");
  data_.assign(static_cast<std::size_t>(width) * height * depth, fill);
}

void accumulate_interval(double s, double e, std::span<double> coeffs) {
  if (coeffs.empty()) return;
  coeffs[0] += e - s;
  const std::size_t channels = coeffs.size();
  if (channels == 1) return;

  const double cs1 = std::cos(std::numbers::pi * s);
  const double ss1 = std::sin(std::numbers::pi * s);
  const double ce1 = std::cos(std::numbers::pi * e);
  const double se1 = std::sin(std::numbers::pi * e);
  double cs = cs1, ss = ss1, ce = ce1, se = se1;
  for (std::size_t n = 1;; ++n) {
    const double inv = 1.0 / (static_cast<double>(n) * std::numbers::pi);
    const std::size_t ca = 2 * n - 1;
    if (ca >= channels) break;
    coeffs[ca] += (se - ss) * inv;
    if (ca + 1 >= channels) break;
    coeffs[ca + 1] += (cs - ce) * inv;
    // Advance the angles by pi * s and pi * e.
    const double cs_next = cs * cs1 - ss * ss1;
    ss = ss * cs1 + cs * ss1;
    cs = cs_next;
    const double ce_next = ce * ce1 - se * se1;
    se = se * ce1 + ce * se1;
    ce = ce_next;
  }
}

FofGrid intervals_to_fof(const IntervalImage& intervals, int channels) {
  FofGrid fof(intervals.width(), intervals.height(), channels);
  const int width = intervals.width();
  const int height = intervals.height();
#pragma omp parallel
  {
    std::vector<double> acc(static_cast<std::size_t>(channels));
#pragma omp for schedule(dynamic, 8)
    for (int j = 0; j < height; ++j) {
      for (int i = 0; i < width; ++i) {
        const auto pixel = intervals.at(i, j);
        if (pixel.empty()) continue;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (const Interval& iv : pixel) accumulate_interval(iv.z_in, iv.z_out, acc);
        auto out = fof.pixel(i, j);
        for (int c = 0; c < channels; ++c) out[c] = static_cast<float>(acc[c]);
      }
    }
  }
  return fof;
}

std::vector<double> inversion_basis(int channels, int depth,
                                    const DecodeOptions& options) {
  if (channels < 1 || depth < 2) throw FormatError("inversion needs C >= 1 and R >= 2");
  const int max_harmonic = channels / 2;
  std::vector<double> basis(static_cast<std::size_t>(depth) * channels);
  for (int k = 0; k < depth; ++k) {
    const double z = depth_sample(k, depth);
    for (int c = 0; c < channels; ++c) {
      const ChannelTerm term = channel_term(c);
      double value;
      if (term.harmonic == 0) {
        value = 0.5;
      } else {
        const double angle = term.harmonic * std::numbers::pi * z;
        value = term.sine ? std::sin(angle) : std::cos(angle);
        if (options.lanczos_sigma) {
          const double x = std::numbers::pi * term.harmonic / (max_harmonic + 1.0);
          value *= std::sin(x) / x;
        }
      }
      basis[static_cast<std::size_t>(k) * channels + c] = value;
    }
  }
  return basis;
}

OccupancyGrid fof_to_occupancy(const FofGrid& fof, int depth,
                               const DecodeOptions& options) {
  const int channels = fof.channels();
  const std::vector<double> basis = inversion_basis(channels, depth, options);
  // Channel-major copy so the inner loop runs over contiguous depth samples.
  std::vector<double> by_channel(basis.size());
  for (int k = 0; k < depth; ++k) {
    for (int c = 0; c < channels; ++c) {
      by_channel[static_cast<std::size_t>(c) * depth + k] =
          basis[static_cast<std::size_t>(k) * channels + c];
    }
  }

  OccupancyGrid grid(fof.width(), fof.height(), depth);
  const int width = fof.width();
  const int height = fof.height();
#pragma omp parallel
  {
    std::vector<double> acc(static_cast<std::size_t>(depth));
#pragma omp for schedule(dynamic, 4)
    for (int j = 0; j < height; ++j) {
      for (int i = 0; i < width; ++i) {
        const auto coeffs = fof.pixel(i, j);
        bool any = false;
        for (float v : coeffs) any |= (v != 0.0f);
        if (!any) continue;
        std::fill(acc.begin(), acc.end(), 0.0);
        double* out_acc = acc.data();
        for (int c = 0; c < channels; ++c) {
          const double coef = coeffs[c];
          if (coef == 0.0) continue;
          const double* row = by_channel.data() + static_cast<std::size_t>(c) * depth;
#pragma omp simd
          for (int k = 0; k < depth; ++k) out_acc[k] += row[k] * coef;
        }
        auto column = grid.column(i, j);
        for (int k = 0; k < depth; ++k) column[k] = static_cast<float>(acc[k]);
      }
    }
  }
  return grid;
}

IntervalImage occupancy_to_intervals(const OccupancyGrid& grid, double iso) {
  if (!(iso > 0.0 && iso < 1.0)) throw FormatError("iso must lie in (0, 1)");
  const int width = grid.width();
  const int height = grid.height();
  const int depth = grid.depth();
  const double step = 2.0 / depth;

  std::vector<std::vector<Interval>> rows(static_cast<std::size_t>(height));
  std::vector<std::vector<std::uint32_t>> counts(static_cast<std::size_t>(height));
#pragma omp parallel for schedule(dynamic, 8)
  for (int j = 0; j < height; ++j) {
    counts[j].resize(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) {
      const auto col = grid.column(i, j);
      const std::size_t before = rows[j].size();
      int k = 0;
      while (k < depth) {
        if (!(col[k] >= iso)) {
          ++k;
          continue;
        }
        double z_in;
        if (k == 0) {
          z_in = -1.0;
        } else {
          const double v0 = col[k - 1];
          const double v1 = col[k];
          z_in = depth_sample(k - 1, depth) + (iso - v0) / (v1 - v0) * step;
        }
        int last = k;
        while (last + 1 < depth && col[last + 1] >= iso) ++last;
        double z_out;
        if (last == depth - 1) {
          z_out = 1.0;
        } else {
          const double v0 = col[last];
          const double v1 = col[last + 1];
          z_out = depth_sample(last, depth) + (v0 - iso) / (v0 - v1) * step;
        }
        if (z_in < z_out) {
          if (rows[j].size() > before && z_in <= rows[j].back().z_out) {
            rows[j].back().z_out = z_out;
          } else {
            rows[j].push_back({z_in, z_out});
          }
        }
        k = last + 1;
      }
      counts[j][static_cast<std::size_t>(i)] =
          static_cast<std::uint32_t>(rows[j].size() - before);
    }
  }

  std::vector<std::uint32_t> offsets{0};
  offsets.reserve(static_cast<std::size_t>(width) * height + 1);
  std::vector<Interval> intervals;
  for (int j = 0; j < height; ++j) {
    for (std::uint32_t c : counts[j]) offsets.push_back(offsets.back() + c);
    intervals.insert(intervals.end(), rows[j].begin(), rows[j].end());
  }
  return IntervalImage(width, height, std::move(offsets), std::move(intervals));
}

OccupancyGrid voxelize_intervals(const IntervalImage& intervals, int depth) {
  OccupancyGrid grid(intervals.width(), intervals.height(), depth);
#pragma omp parallel for schedule(dynamic, 8)
  for (int j = 0; j < intervals.height(); ++j) {
    for (int i = 0; i < intervals.width(); ++i) {
      auto column = grid.column(i, j);
      for (const Interval& iv : intervals.at(i, j)) {
        // First k with z_k >= z_in, through the last with z_k <= z_out.
        int k = std::max(0, static_cast<int>(std::ceil((iv.z_in + 1.0) * depth / 2.0 - 0.5)) - 1);
        for (; k < depth; ++k) {
          const double z = depth_sample(k, depth);
          if (z > iv.z_out) break;
          if (z >= iv.z_in) column[k] = 1.0f;
        }
      }
    }
  }
  return grid;
}

BandSplit band_split(const FofGrid& fof, int low_channels) {
  const int channels = fof.channels();
  if (low_channels < 1 || low_channels >= channels) {
    throw FormatError("band split point " + std::to_string(low_channels) +
                      " outside [1, " + std::to_string(channels - 1) + "]");
  }
  BandSplit out{FofGrid(fof.width(), fof.height(), low_channels),
                FofGrid(fof.width(), fof.height(), channels - low_channels),
                low_channels};
  for (int j = 0; j < fof.height(); ++j) {
    for (int i = 0; i < fof.width(); ++i) {
      const auto src = fof.pixel(i, j);
      std::copy(src.begin(), src.begin() + low_channels, out.low.pixel(i, j).begin());
      std::copy(src.begin() + low_channels, src.end(), out.high.pixel(i, j).begin());
    }
  }
  return out;
}

FofGrid band_merge(const FofGrid& low, const FofGrid& high) {
  if (low.width() != high.width() || low.height() != high.height()) {
    throw FormatError("band shapes differ");
  }
  FofGrid out(low.width(), low.height(), low.channels() + high.channels());
  for (int j = 0; j < low.height(); ++j) {
    for (int i = 0; i < low.width(); ++i) {
      auto dst = out.pixel(i, j);
      const auto lo = low.pixel(i, j);
      const auto hi = high.pixel(i, j);
      std::copy(lo.begin(), lo.end(), dst.begin());
      std::copy(hi.begin(), hi.end(), dst.begin() + low.channels());
    }
  }
  return out;
}

FofGrid band_merge(const BandSplit& split) {
  if (split.low.channels() != split.split) throw FormatError("band split metadata mismatch");
  return band_merge(split.low, split.high);
}

double hf_mse(const FofGrid& pred, const FofGrid& truth) {
  if (pred.width() != truth.width() || pred.height() != truth.height() ||
      pred.channels() != truth.channels()) {
    throw FormatError("hf_mse shape mismatch");
  }
  const auto p = pred.data();
  const auto t = truth.data();
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = static_cast<double>(p[k]) - static_cast<double>(t[k]);
    sum += d * d;
  }
  return sum / static_cast<double>(p.size());
}

FofGrid sphere_fof(const Vec3& center, double radius, int width, int height,
                   int channels) {
  if (!(radius > 0.0)) throw GeometryError("sphere radius must be positive");
  FofGrid fof(width, height, channels);
  const double r2 = radius * radius;
#pragma omp parallel
  {
    std::vector<double> acc(static_cast<std::size_t>(channels));
#pragma omp for schedule(static)
    for (int j = 0; j < height; ++j) {
      const double dy = pixel_y(j, height) - center.y;
      for (int i = 0; i < width; ++i) {
        const double dx = pixel_x(i, width) - center.x;
        const double d2 = dx * dx + dy * dy;
        if (d2 > r2) continue;
        const double h = std::sqrt(r2 - d2);
        const double s = std::max(center.z - h, -1.0);
        const double e = std::min(center.z + h, 1.0);
        if (!(s < e)) continue;
        std::fill(acc.begin(), acc.end(), 0.0);
        accumulate_interval(s, e, acc);
        auto out = fof.pixel(i, j);
        for (int c = 0; c < channels; ++c) out[c] = static_cast<float>(acc[c]);
      }
    }
  }
  return fof;
}

}  // namespace fofkit
