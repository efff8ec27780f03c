#include "fofkit/image.hpp"

#include <png.h>

#include <string>

#include "fofkit/error.hpp"

namespace fofkit {

// libpng's simplified API keeps its setjmp handling internal.

Image read_png(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("cannot open " + path.string());
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
    throw FormatError(path.string() + ": " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (png.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  png.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB)
                     : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);

  Image image(static_cast<int>(png.width), static_cast<int>(png.height),
              static_cast<int>(PNG_IMAGE_SAMPLE_CHANNELS(png.format)));
  if (!png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw FormatError(path.string() + ": " + message);
  }
  return image;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  switch (image.channels) {
    case 1: png.format = PNG_FORMAT_GRAY; break;
    case 2: png.format = PNG_FORMAT_GA; break;
    case 3: png.format = PNG_FORMAT_RGB; break;
    case 4: png.format = PNG_FORMAT_RGBA; break;
    default: throw FormatError("PNG supports 1 to 4 channels");
  }
  if (image.pixels.size() !=
      static_cast<std::size_t>(image.width) * image.height * image.channels) {
    throw FormatError("image buffer does not match its shape");
  }
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, image.pixels.data(), 0,
                               nullptr)) {
    throw IoError(path.string() + ": " + png.message);
  }
}

}  // namespace fofkit
