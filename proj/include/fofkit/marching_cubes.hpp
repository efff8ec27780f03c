#pragma once

#include "fofkit/fof.hpp"
#include "fofkit/mesh.hpp"

namespace fofkit {

/// Plain 256-case marching cubes over the grid's sample lattice (voxel
/// centers in the canonical frame). The grid is padded with one layer of
/// outside samples so the surface closes at the domain boundary. Samples
/// >= iso are inside; triangles wind counter-clockwise seen from outside.
/// Vertices are welded per lattice edge and ordered by edge key, so the
/// output is independent of thread count.
Mesh marching_cubes(const OccupancyGrid& grid, double iso = kDefaultIso);

}  // namespace fofkit
