#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fofkit/vec.hpp"

namespace fofkit {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh. Coordinates are dimensionless; after
/// normalize_mesh they live in the canonical [-1,1]^3 frame
/// (right-handed, y up, camera looking along +z).
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  /// Set when every undirected edge is shared by exactly two triangles.
  bool watertight = false;

  bool empty() const { return triangles.empty(); }
};

/// normalized = (raw - offset) * scale
struct NormalizedFrame {
  double scale = 1.0;
  Vec3 offset{};

  Vec3 to_normalized(const Vec3& raw) const { return (raw - offset) * scale; }
  Vec3 to_raw(const Vec3& normalized) const {
    return normalized * (1.0 / scale) + offset;
  }
};

inline constexpr double kDefaultMargin = 0.05;
inline constexpr double kDegenerateArea = 1e-12;

/// Reads OBJ or PLY (ASCII, binary little/big endian). Polygons are
/// fan-triangulated and faces with repeated indices are dropped; both are
/// reported through `warnings`. Sets Mesh::watertight from edge topology.
Mesh load_mesh(const std::filesystem::path& path,
               std::vector<std::string>& warnings);
Mesh load_mesh(const std::filesystem::path& path);

/// Writes by extension (.obj, .ply). Vertex order is preserved. PLY output is
/// binary little endian unless `ascii` is set.
void save_mesh(const Mesh& mesh, const std::filesystem::path& path,
               bool ascii = false);

struct NormalizeResult {
  Mesh mesh;
  NormalizedFrame frame;
  std::size_t dropped_degenerate = 0;
};

/// Centers the bounding box at the origin and scales the largest extent to
/// 2 * (1 - margin). Triangles whose normalized area is <= 1e-12 are dropped.
NormalizeResult normalize_mesh(const Mesh& mesh,
                               double margin = kDefaultMargin);

/// Applies the inverse of `frame` to every vertex.
Mesh denormalize_mesh(const Mesh& mesh, const NormalizedFrame& frame);

/// Rotation about +y (right-handed):
///   x' =  x cos t + z sin t
///   z' = -x sin t + z cos t
Vec3 rotate_yaw(const Vec3& p, double theta);
Mesh rotate_yaw(const Mesh& mesh, double theta);

// Topology helpers.

/// Count of undirected edges not shared by exactly two triangles.
std::size_t count_nonmanifold_edges(const Mesh& mesh);
/// V - E + F over referenced vertices.
long euler_characteristic(const Mesh& mesh);
/// Signed volume by the divergence theorem; positive for outward winding.
double mesh_volume(const Mesh& mesh);
double surface_area(const Mesh& mesh);
double triangle_area(const Mesh& mesh, std::size_t t);

// Closed test shapes with outward (counter-clockwise) winding.

Mesh make_box(const Vec3& lo, const Vec3& hi);
Mesh make_icosphere(const Vec3& center, double radius, int subdivisions);
Mesh make_torus(const Vec3& center, double major_radius, double minor_radius,
                int major_segments, int minor_segments);

}  // namespace fofkit
