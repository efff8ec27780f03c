#include "fofkit/render.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fofkit/error.hpp"

namespace fofkit {

void RenderSpec::validate() const {
  if (view_count < 1) throw FormatError("render needs at least one view");
  if (width < 1 || height < 1) throw FormatError("render size must be positive");
  if (std::fabs(view_count * yaw_interval_deg - 360.0) > 1e-9) {
    throw FormatError("view count times yaw interval must equal 360 degrees");
  }
}

namespace {

std::vector<Vec3> vertex_normals(const Mesh& mesh) {
  std::vector<Vec3> normals(mesh.vertices.size());
  for (const Triangle& t : mesh.triangles) {
    // Area-weighted face normal.
    const Vec3 n = cross(mesh.vertices[t[1]] - mesh.vertices[t[0]],
                         mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    for (std::uint32_t v : t) normals[v] += n;
  }
  for (Vec3& n : normals) n = normalized(n);
  return normals;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Top-left fill rule in raster space (x right, y down).
bool is_top_left(double ax, double ay, double bx, double by) {
  return (ay == by && bx < ax) || by < ay;
}

}  // namespace

Image render_view(const Mesh& mesh, double yaw_rad, int width, int height, RenderMode mode) {
  const Mesh view = rotate_yaw(mesh, yaw_rad);
  const std::vector<Vec3> normals = vertex_normals(view);
  const bool normal_mode = mode == RenderMode::kNormal;
  Image image(width, height, 3, normal_mode ? kNormalBackground : kShadingBackground);
  std::vector<double> depth(static_cast<std::size_t>(width) * height,
                            std::numeric_limits<double>::infinity());

  // Raster coordinates place pixel (i, j) center at (i, j).
  auto to_raster = [&](const Vec3& p) {
    return Vec3{(p.x + 1.0) * 0.5 * width - 0.5, (1.0 - p.y) * 0.5 * height - 0.5, p.z};
  };

  for (const Triangle& t : view.triangles) {
    Vec3 p[3] = {to_raster(view.vertices[t[0]]), to_raster(view.vertices[t[1]]),
                 to_raster(view.vertices[t[2]])};
    Vec3 n[3] = {normals[t[0]], normals[t[1]], normals[t[2]]};
    double area = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[1].y - p[0].y) * (p[2].x - p[0].x);
    if (area == 0.0) continue;
    if (area < 0.0) {
      std::swap(p[1], p[2]);
      std::swap(n[1], n[2]);
      area = -area;
    }
    const int i0 = std::max(0, static_cast<int>(std::ceil(std::min({p[0].x, p[1].x, p[2].x}))));
    const int i1 = std::min(width - 1, static_cast<int>(std::floor(std::max({p[0].x, p[1].x, p[2].x}))));
    const int j0 = std::max(0, static_cast<int>(std::ceil(std::min({p[0].y, p[1].y, p[2].y}))));
    const int j1 = std::min(height - 1, static_cast<int>(std::floor(std::max({p[0].y, p[1].y, p[2].y}))));
    if (i0 > i1 || j0 > j1) continue;

    bool top_left[3];
    for (int e = 0; e < 3; ++e) {
      const Vec3& a = p[(e + 1) % 3];
      const Vec3& b = p[(e + 2) % 3];
      top_left[e] = is_top_left(a.x, a.y, b.x, b.y);
    }
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        double w[3];
        bool inside = true;
        for (int e = 0; e < 3 && inside; ++e) {
          const Vec3& a = p[(e + 1) % 3];
          const Vec3& b = p[(e + 2) % 3];
          w[e] = (b.x - a.x) * (j - a.y) - (b.y - a.y) * (i - a.x);
          inside = w[e] > 0.0 || (w[e] == 0.0 && top_left[e]);
        }
        if (!inside) continue;
        const double inv = 1.0 / area;
        const double b0 = w[0] * inv, b1 = w[1] * inv, b2 = w[2] * inv;
        const double z = b0 * p[0].z + b1 * p[1].z + b2 * p[2].z;
        const std::size_t px = static_cast<std::size_t>(j) * width + i;
        if (!(z < depth[px])) continue;
        depth[px] = z;
        const Vec3 normal = normalized(n[0] * b0 + n[1] * b1 + n[2] * b2);
        std::uint8_t* rgb = image.at(i, j);
        if (normal_mode) {
          rgb[0] = to_byte((normal.x + 1.0) * 0.5);
          rgb[1] = to_byte((normal.y + 1.0) * 0.5);
          rgb[2] = to_byte((normal.z + 1.0) * 0.5);
        } else {
          const std::uint8_t g = to_byte(std::max(0.0, -normal.z));
          rgb[0] = rgb[1] = rgb[2] = g;
        }
      }
    }
  }
  return image;
}

std::vector<RenderedView> render_views(const Mesh& mesh, const RenderSpec& spec) {
  spec.validate();
  if (mesh.empty()) throw GeometryError("cannot render an empty mesh");
  std::vector<RenderedView> views(static_cast<std::size_t>(spec.view_count));
#pragma omp parallel for schedule(dynamic, 1)
  for (int v = 0; v < spec.view_count; ++v) {
    const double deg = v * spec.yaw_interval_deg;
    views[v].yaw_deg = deg;
    views[v].image = render_view(mesh, deg * std::numbers::pi / 180.0, spec.width, spec.height,
                                 spec.mode);
  }
  return views;
}

}  // namespace fofkit
