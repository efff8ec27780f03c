#include "fofkit/marching_cubes.hpp"

#include <omp.h>

#include <algorithm>
#include <array>

#include "fofkit/error.hpp"
#include "fofkit/raycast.hpp"
#include "mc_tables.hpp"

namespace fofkit {

namespace {

// Corner offsets (di, dj, dk) in table order.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
// Edge -> (base corner, axis).
constexpr int kEdgeBase[12] = {0, 1, 3, 0, 4, 5, 7, 4, 0, 1, 2, 3};
constexpr int kEdgeAxis[12] = {0, 1, 0, 1, 0, 1, 0, 1, 2, 2, 2, 2};

// Lattice index space has j pointing down while world y points up, so the
// table's winding is mirrored; swapping two corners restores outward order.
constexpr bool kFlipWinding = true;

class PaddedLattice {
 public:
  PaddedLattice(const OccupancyGrid& grid)
      : grid_(grid), w_(grid.width()), h_(grid.height()), r_(grid.depth()) {}

  // Point indices run over [-1, W] x [-1, H] x [-1, R]; outside samples are 0.
  float value(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= w_ || j >= h_ || k >= r_) return 0.0f;
    return grid_.at(i, j, k);
  }

  std::uint64_t key(int i, int j, int k, int axis) const {
    const std::uint64_t id =
        (static_cast<std::uint64_t>(j + 1) * (w_ + 2) + static_cast<std::uint64_t>(i + 1)) *
            static_cast<std::uint64_t>(r_ + 2) +
        static_cast<std::uint64_t>(k + 1);
    return id * 3 + static_cast<std::uint64_t>(axis);
  }

  Vec3 vertex(std::uint64_t key, double iso) const {
    const int axis = static_cast<int>(key % 3);
    std::uint64_t id = key / 3;
    const int k = static_cast<int>(id % static_cast<std::uint64_t>(r_ + 2)) - 1;
    id /= static_cast<std::uint64_t>(r_ + 2);
    const int i = static_cast<int>(id % static_cast<std::uint64_t>(w_ + 2)) - 1;
    const int j = static_cast<int>(id / static_cast<std::uint64_t>(w_ + 2)) - 1;
    const int i1 = i + (axis == 0);
    const int j1 = j + (axis == 1);
    const int k1 = k + (axis == 2);
    const double v0 = value(i, j, k);
    const double v1 = value(i1, j1, k1);
    const double t = v1 != v0 ? std::clamp((iso - v0) / (v1 - v0), 0.0, 1.0) : 0.5;
    const Vec3 p0{pixel_x(i, w_), pixel_y(j, h_), depth_sample(k, r_)};
    const Vec3 p1{pixel_x(i1, w_), pixel_y(j1, h_), depth_sample(k1, r_)};
    return p0 + (p1 - p0) * t;
  }

 private:
  const OccupancyGrid& grid_;
  int w_;
  int h_;
  int r_;
};

}  // namespace

Mesh marching_cubes(const OccupancyGrid& grid, double iso) {
  if (!(iso > 0.0 && iso < 1.0)) throw FormatError("iso must lie in (0, 1)");
  const int w = grid.width();
  const int h = grid.height();
  const int r = grid.depth();
  const float iso_f = static_cast<float>(iso);
  const PaddedLattice lattice(grid);

  // Columns holding at least one inside sample; cells whose four corner
  // columns are all outside cannot produce triangles.
  std::vector<std::uint8_t> column_inside(static_cast<std::size_t>(w) * h, 0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      for (float v : grid.column(i, j)) {
        if (v >= iso_f) {
          column_inside[static_cast<std::size_t>(j) * w + i] = 1;
          break;
        }
      }
    }
  }
  auto inside_column = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= w || j >= h) return false;
    return column_inside[static_cast<std::size_t>(j) * w + i] != 0;
  };

  using KeyTriangle = std::array<std::uint64_t, 3>;
  std::vector<std::vector<KeyTriangle>> slabs(static_cast<std::size_t>(h + 1));

#pragma omp parallel for schedule(dynamic, 2)
  for (int jc = -1; jc < h; ++jc) {
    auto& out = slabs[static_cast<std::size_t>(jc + 1)];
    for (int ic = -1; ic < w; ++ic) {
      if (!inside_column(ic, jc) && !inside_column(ic + 1, jc) &&
          !inside_column(ic, jc + 1) && !inside_column(ic + 1, jc + 1)) {
        continue;
      }
      for (int kc = -1; kc < r; ++kc) {
        int cube = 0;
        for (int c = 0; c < 8; ++c) {
          const float v = lattice.value(ic + kCorner[c][0], jc + kCorner[c][1],
                                        kc + kCorner[c][2]);
          if (!(v >= iso_f)) cube |= 1 << c;
        }
        if (cube == 0 || cube == 255) continue;
        const std::int8_t* row = detail::kTriTable[cube];
        for (int t = 0; row[t] != -1; t += 3) {
          KeyTriangle tri;
          for (int m = 0; m < 3; ++m) {
            const int e = row[t + m];
            const int* base = kCorner[kEdgeBase[e]];
            tri[m] = lattice.key(ic + base[0], jc + base[1], kc + base[2], kEdgeAxis[e]);
          }
          if (kFlipWinding) std::swap(tri[1], tri[2]);
          out.push_back(tri);
        }
      }
    }
  }

  std::size_t tri_count = 0;
  for (const auto& s : slabs) tri_count += s.size();
  std::vector<std::uint64_t> keys;
  keys.reserve(tri_count * 3);
  for (const auto& s : slabs) {
    for (const KeyTriangle& t : s) keys.insert(keys.end(), t.begin(), t.end());
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  Mesh mesh;
  mesh.vertices.resize(keys.size());
#pragma omp parallel for schedule(static)
  for (std::size_t v = 0; v < keys.size(); ++v) {
    mesh.vertices[v] = lattice.vertex(keys[v], iso);
  }
  mesh.triangles.reserve(tri_count);
  for (const auto& s : slabs) {
    for (const KeyTriangle& t : s) {
      Triangle tri;
      for (int m = 0; m < 3; ++m) {
        tri[m] = static_cast<std::uint32_t>(
            std::lower_bound(keys.begin(), keys.end(), t[m]) - keys.begin());
      }
      mesh.triangles.push_back(tri);
    }
  }
  mesh.watertight = !mesh.triangles.empty();
  return mesh;
}

}  // namespace fofkit
