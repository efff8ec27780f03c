#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace fofkit {

/// 8-bit interleaved image, row 0 at the top.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c),
        pixels(static_cast<std::size_t>(w) * h * c, fill) {}

  std::uint8_t* at(int i, int j) {
    return pixels.data() + (static_cast<std::size_t>(j) * width + i) * channels;
  }
  const std::uint8_t* at(int i, int j) const {
    return pixels.data() + (static_cast<std::size_t>(j) * width + i) * channels;
  }
  friend bool operator==(const Image&, const Image&) = default;
};

/// 8-bit PNG; gray/RGB/RGBA supported, palettes expanded, 16-bit stripped.
Image read_png(const std::filesystem::path& path);
void write_png(const Image& image, const std::filesystem::path& path);

}  // namespace fofkit
