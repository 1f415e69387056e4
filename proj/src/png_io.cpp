#include <png.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "hypertune/image_metrics.hpp"

namespace hypertune {

Image load_png(const std::string &path) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw std::runtime_error(path + ": " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw std::runtime_error(path + ": " + message);
  }
  Image img{static_cast<int>(png.width), static_cast<int>(png.height),
            color ? 3 : 1, {}};
  img.pixels.reserve(buffer.size());
  for (png_byte v : buffer) img.pixels.push_back(v / 255.0);
  return img;
}

void save_png(const std::string &path, const Image &image) {
  image.check();
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer;
  buffer.reserve(image.pixels.size());
  for (double v : image.pixels) {
    buffer.push_back(static_cast<png_byte>(std::lround(v * 255.0)));
  }
  if (!png_image_write_to_file(&png, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw std::runtime_error(path + ": " + png.message);
  }
}

}  // namespace hypertune
