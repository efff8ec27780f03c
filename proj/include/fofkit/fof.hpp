#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fofkit/raycast.hpp"

namespace fofkit {

/// Channel layout of a Fourier occupancy field. Only one layout exists:
/// [a0, a1, b1, a2, b2, ...] truncated to the channel count, so an even count
/// drops the last sine term.
enum class ChannelLayout : std::uint32_t { kCosSinInterleaved = 0 };

/// Harmonic described by one channel.
struct ChannelTerm {
  int harmonic = 0;   // n
  bool sine = false;  // b_n when true, a_n otherwise
};

constexpr ChannelTerm channel_term(int channel) {
  if (channel == 0) return {0, false};
  return {(channel + 1) / 2, channel % 2 == 0};
}

/// W x H x C truncated Fourier coefficients of per-pixel depth occupancy.
/// Storage is row-major (j, i, c) with c fastest, 32-bit floats.
class FofGrid {
 public:
  FofGrid() = default;
  FofGrid(int width, int height, int channels);
  FofGrid(int width, int height, int channels, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  ChannelLayout layout() const { return ChannelLayout::kCosSinInterleaved; }

  std::size_t index(int i, int j, int c = 0) const {
    return (static_cast<std::size_t>(j) * width_ + i) * channels_ + c;
  }
  float at(int i, int j, int c) const { return data_[index(i, j, c)]; }
  float& at(int i, int j, int c) { return data_[index(i, j, c)]; }
  std::span<const float> pixel(int i, int j) const {
    return {data_.data() + index(i, j), static_cast<std::size_t>(channels_)};
  }
  std::span<float> pixel(int i, int j) {
    return {data_.data() + index(i, j), static_cast<std::size_t>(channels_)};
  }
  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  friend bool operator==(const FofGrid&, const FofGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// Dense W x H x R occupancy samples at depth cell centers
/// z_k = -1 + (2k + 1) / R. Storage is (j, i, k) with k fastest.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, int depth, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  int depth() const { return depth_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(j) * width_ + i) * depth_ + k;
  }
  float at(int i, int j, int k) const { return data_[index(i, j, k)]; }
  float& at(int i, int j, int k) { return data_[index(i, j, k)]; }
  std::span<const float> column(int i, int j) const {
    return {data_.data() + index(i, j), static_cast<std::size_t>(depth_)};
  }
  std::span<float> column(int i, int j) {
    return {data_.data() + index(i, j), static_cast<std::size_t>(depth_)};
  }
  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int depth_ = 0;
  std::vector<float> data_;
};

inline double depth_sample(int k, int depth) {
  return -1.0 + (2.0 * k + 1.0) / depth;
}

inline constexpr double kDefaultIso = 0.5;

/// Adds the closed-form coefficients of the indicator of [s, e] to
/// `coeffs` (one entry per channel).
void accumulate_interval(double s, double e, std::span<double> coeffs);

/// Encodes every pixel's intervals; empty pixels are all-zero.
FofGrid intervals_to_fof(const IntervalImage& intervals, int channels);

struct DecodeOptions {
  /// Multiply harmonic n by sinc(n / (N + 1)) to damp Gibbs ringing.
  bool lanczos_sigma = false;
};

/// R x C basis matrix (row-major, C fastest) used by fof_to_occupancy.
std::vector<double> inversion_basis(int channels, int depth,
                                    const DecodeOptions& options = {});

/// Evaluates a0/2 + sum_n [a_n cos(n pi z) + b_n sin(n pi z)] at every depth
/// sample through one basis-matrix product per pixel.
OccupancyGrid fof_to_occupancy(const FofGrid& fof, int depth,
                               const DecodeOptions& options = {});

/// Maximal runs of samples >= iso, with endpoints placed by linear
/// interpolation between neighbouring samples. Runs touching the first or
/// last sample extend to the domain boundary.
IntervalImage occupancy_to_intervals(const OccupancyGrid& grid,
                                     double iso = kDefaultIso);

/// Binary occupancy of the intervals at depth cell centers (center inside
/// a closed interval => 1).
OccupancyGrid voxelize_intervals(const IntervalImage& intervals, int depth);

struct BandSplit {
  FofGrid low;
  FofGrid high;
  int split = 0;
};

BandSplit band_split(const FofGrid& fof, int low_channels);
FofGrid band_merge(const FofGrid& low, const FofGrid& high);
FofGrid band_merge(const BandSplit& split);

/// Mean squared error over every pixel and channel.
double hf_mse(const FofGrid& pred, const FofGrid& truth);

/// FOF of a solid sphere: per pixel the chord [cz - h, cz + h] clipped to
/// [-1, 1], h = sqrt(r^2 - d^2).
FofGrid sphere_fof(const Vec3& center, double radius, int width, int height,
                   int channels);

}  // namespace fofkit
