#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fofkit/fof.hpp"
#include "fofkit/mesh.hpp"

namespace fofkit {

/// Transformation applied to each auxiliary view's FOF before inversion.
/// Implementations must return a grid of the input's shape.
class Refiner {
 public:
  virtual ~Refiner() = default;
  virtual std::string name() const = 0;
  virtual FofGrid refine(const FofGrid& fof, int view) const = 0;
};

class IdentityRefiner final : public Refiner {
 public:
  std::string name() const override { return "identity"; }
  FofGrid refine(const FofGrid& fof, int) const override { return fof; }
};

/// Zeroes every channel at or above `low_channels`.
class BandZeroRefiner final : public Refiner {
 public:
  explicit BandZeroRefiner(int low_channels) : low_channels_(low_channels) {}
  std::string name() const override { return "band-zero"; }
  FofGrid refine(const FofGrid& fof, int view) const override;

 private:
  int low_channels_;
};

/// File-exchange refiner for an out-of-process model: writes
/// `<dir>/view_<k>.fof`, then polls for `<dir>/view_<k>.refined.fof`.
class ExternRefiner final : public Refiner {
 public:
  explicit ExternRefiner(std::filesystem::path dir,
                         std::chrono::milliseconds timeout = std::chrono::hours(1),
                         std::chrono::milliseconds poll = std::chrono::milliseconds(100));
  std::string name() const override { return "extern:" + dir_.string(); }
  FofGrid refine(const FofGrid& fof, int view) const override;

  static std::filesystem::path request_path(const std::filesystem::path& dir,
                                            int view);
  static std::filesystem::path response_path(const std::filesystem::path& dir,
                                             int view);

 private:
  std::filesystem::path dir_;
  std::chrono::milliseconds timeout_;
  std::chrono::milliseconds poll_;
};

/// "identity", "band-zero" or "extern:<dir>".
std::unique_ptr<Refiner> make_refiner(std::string_view spec,
                                      int low_channels);

struct RecarvePlan {
  /// Auxiliary yaw angles; the canonical view (0) is implied and first.
  std::vector<double> angles{std::numbers::pi / 2.0};
  /// One weight per view, canonical first.
  std::vector<double> weights{0.5, 0.5};
  int depth = 512;
  double iso = kDefaultIso;

  /// FormatError unless weights.size() == angles.size() + 1, all weights are
  /// non-negative and they sum to 1 within 1e-9.
  void validate() const;
};

/// Equal weights over the canonical view and `angles`.
RecarvePlan make_plan(std::vector<double> angles, int depth,
                      double iso = kDefaultIso);

/// rotate_yaw -> raycast -> intervals_to_fof -> refiner -> fof_to_occupancy.
/// The result lives in the rotated frame on a depth^3 lattice.
OccupancyGrid view_occupancy(const Mesh& mesh, double theta, int channels,
                             int depth, const Refiner& refiner, int view = 0);

struct ResampleOptions {
  /// Permit W != R; cells are then anisotropic in x-z.
  bool allow_anisotropic = false;
};

/// canonical(p) = trilinear sample of `grid` at rotate_yaw(p, theta); points
/// outside [-1, 1]^3 read as 0.
OccupancyGrid resample_to_canonical(const OccupancyGrid& grid, double theta,
                                    const ResampleOptions& options = {});

/// Voxel-wise sum_i w_i F_i accumulated in double in list order.
OccupancyGrid blend_fields(std::span<const OccupancyGrid> fields,
                           std::span<const double> weights);

struct RecarveResult {
  OccupancyGrid occupancy;
  Mesh mesh;
  /// Per-view FOF after refinement, canonical first; only kept when asked.
  std::vector<FofGrid> view_fofs;
};

/// Canonical occupancy plus each auxiliary view (refined, resampled back to
/// the canonical lattice), blended by plan weights and meshed at plan.iso.
/// The refiner is applied to auxiliary views only.
RecarveResult recarve(const Mesh& mesh, const RecarvePlan& plan, int channels,
                      const Refiner& refiner, bool keep_view_fofs = false);

}  // namespace fofkit
