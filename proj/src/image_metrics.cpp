#include "hypertune/image_metrics.hpp"

#include <cmath>
#include <numeric>

#include "hypertune/error.hpp"

namespace hypertune {
namespace {

void require_same_shape(const Image &a, const Image &b) {
  a.check();
  b.check();
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw StructuralError(
        "image shapes differ: " + std::to_string(a.width) + "x" +
        std::to_string(a.height) + "x" + std::to_string(a.channels) + " vs " +
        std::to_string(b.width) + "x" + std::to_string(b.height) + "x" +
        std::to_string(b.channels));
  }
}

double ssim_formula(double mu_a, double mu_b, double var_a, double var_b,
                    double cov, const SsimConfig &cfg) {
  return ((2.0 * mu_a * mu_b + cfg.c1) * (2.0 * cov + cfg.c2)) /
         ((mu_a * mu_a + mu_b * mu_b + cfg.c1) * (var_a + var_b + cfg.c2));
}

double global_ssim(const Image &a, const Image &b, int channel,
                   const SsimConfig &cfg) {
  const double n = static_cast<double>(a.width) * a.height;
  double sa = 0.0, sb = 0.0;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      sa += a.at(x, y, channel);
      sb += b.at(x, y, channel);
    }
  }
  const double mu_a = sa / n;
  const double mu_b = sb / n;
  // second pass around the means; one-pass moments cancel on flat images
  double vaa = 0.0, vbb = 0.0, vab = 0.0;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      const double da = a.at(x, y, channel) - mu_a;
      const double db = b.at(x, y, channel) - mu_b;
      vaa += da * da;
      vbb += db * db;
      vab += da * db;
    }
  }
  return ssim_formula(mu_a, mu_b, vaa / n, vbb / n, vab / n, cfg);
}

}  // namespace

Image Image::filled(int width, int height, int channels, double value) {
  Image img{width, height, channels, {}};
  img.pixels.assign(static_cast<std::size_t>(width) * height * channels, value);
  img.check();
  return img;
}

void Image::check() const {
  if (width <= 0 || height <= 0) throw ValidationError("image has no pixels");
  if (channels != 1 && channels != 3) {
    throw ValidationError("image must have 1 or 3 channels");
  }
  if (pixels.size() != static_cast<std::size_t>(width) * height * channels) {
    throw ValidationError("pixel count does not match image dimensions");
  }
  for (double p : pixels) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("pixel outside [0,1]");
  }
}

std::string to_string(SsimWindow window) {
  return window == SsimWindow::global ? "global" : "gaussian_11x11";
}

SsimWindow parse_ssim_window(const std::string &text) {
  if (text == "global") return SsimWindow::global;
  if (text == "gaussian" || text == "gaussian_11x11") return SsimWindow::gaussian_11x11;
  throw ValidationError("unknown SSIM window '" + text + "'");
}

double mse(const Image &a, const Image &b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.pixels.size());
}

double psnr(const Image &a, const Image &b, double cap) {
  const double e = mse(a, b);
  if (e == 0.0) return cap;
  return 10.0 * std::log10(1.0 / e);
}

double ssim(const Image &a, const Image &b, const SsimConfig &cfg) {
  require_same_shape(a, b);
  if (!(cfg.c1 > 0.0) || !(cfg.c2 > 0.0)) {
    throw ValidationError("SSIM constants must be positive");
  }
  double total = 0.0;
  for (int c = 0; c < a.channels; ++c) {
    if (cfg.window == SsimWindow::global) {
      total += global_ssim(a, b, c, cfg);
    } else {
      const auto map = ssim_map(a, b, c, cfg);
      total += std::accumulate(map.begin(), map.end(), 0.0) /
               static_cast<double>(map.size());
    }
  }
  return total / a.channels;
}

}  // namespace hypertune
