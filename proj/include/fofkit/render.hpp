#pragma once

#include <vector>

#include "fofkit/image.hpp"
#include "fofkit/mesh.hpp"

namespace fofkit {

enum class RenderMode { kNormal, kShading };

struct RenderSpec {
  int view_count = 18;
  double yaw_interval_deg = 20.0;
  int width = 512;
  int height = 512;
  RenderMode mode = RenderMode::kNormal;

  /// FormatError unless view_count * yaw_interval_deg == 360.
  void validate() const;
};

inline constexpr std::uint8_t kNormalBackground = 128;  // (0.5, 0.5, 0.5)
inline constexpr std::uint8_t kShadingBackground = 255;

struct RenderedView {
  double yaw_deg = 0.0;
  Image image;
};

/// Orthographic rasterization of rotate_yaw(mesh, k * interval) for each
/// view; the camera looks along +z. Normal mode writes smooth camera-space
/// normals as RGB = (n + 1) / 2; shading mode is Lambertian with a headlight
/// along -z. Views render in parallel, each deterministically.
std::vector<RenderedView> render_views(const Mesh& mesh,
                                       const RenderSpec& spec = {});

/// A single view at an explicit yaw.
Image render_view(const Mesh& mesh, double yaw_rad, int width, int height,
                  RenderMode mode);

}  // namespace fofkit
