#pragma once

#include <cstdint>
#include <vector>

#include "fofkit/fof.hpp"
#include "fofkit/mesh.hpp"
#include "fofkit/raycast.hpp"

namespace fofkit {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'f0f0'1234'abcdULL;

/// `count` area-weighted surface samples, stratified over the cumulative
/// area with one jittered draw per stratum.
std::vector<Vec3> sample_surface(const Mesh& mesh, std::size_t count,
                                 std::uint64_t seed = kDefaultSeed);

/// Mean distance from a's samples to b's surface plus the mean distance from
/// b's samples to a's surface.
double chamfer(const Mesh& a, const Mesh& b, std::size_t samples,
               std::uint64_t seed = kDefaultSeed);

/// |A and B| / |A or B| over voxels >= iso. Two empty sets give 1.
double grid_iou(const OccupancyGrid& a, const OccupancyGrid& b,
                double iso = kDefaultIso);

/// grid_iou of voxelize_intervals(a, depth) and voxelize_intervals(b, depth)
/// without materializing either grid.
double interval_iou(const IntervalImage& a, const IntervalImage& b, int depth);

std::size_t count_inside(const OccupancyGrid& grid, double iso = kDefaultIso);

}  // namespace fofkit
