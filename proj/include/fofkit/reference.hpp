#pragma once

// Serial reference kernels. Straightforward, unoptimized versions of the
// parallel kernels, kept for equivalence tests and the benchmark.

#include "fofkit/fof.hpp"
#include "fofkit/raycast.hpp"

namespace fofkit::reference {

/// Every triangle against every ray, single thread.
RaycastResult raycast(const Mesh& mesh, int width, int height);

/// Per-interval std::sin / std::cos per harmonic, single thread.
FofGrid intervals_to_fof(const IntervalImage& intervals, int channels);

/// Direct series evaluation per sample, single thread.
OccupancyGrid fof_to_occupancy(const FofGrid& fof, int depth);

}  // namespace fofkit::reference
