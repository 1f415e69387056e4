#pragma once

#include <string>
#include <vector>

namespace hypertune {

/// Row-major, channel-interleaved image with samples in [0,1].
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> pixels;

  static Image filled(int width, int height, int channels, double value);

  double at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double &at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  /// Throws ValidationError on a size mismatch, bad channel count or a
  /// sample outside [0,1].
  void check() const;
};

enum class SsimWindow { global, gaussian_11x11 };

std::string to_string(SsimWindow window);
SsimWindow parse_ssim_window(const std::string &text);

/// C1 = (0.01 L)^2, C2 = (0.03 L)^2 with L = 1.
struct SsimConfig {
  double c1 = 1e-4;
  double c2 = 9e-4;
  SsimWindow window = SsimWindow::gaussian_11x11;
};

inline constexpr double kPsnrCap = 100.0;

/// Mean squared difference over every sample. Throws StructuralError when
/// the shapes differ.
double mse(const Image &a, const Image &b);

/// 10 log10(1 / MSE); `cap` when the images are identical.
double psnr(const Image &a, const Image &b, double cap = kPsnrCap);

/// Structural similarity averaged over channels. The Gaussian mode averages
/// the local index over every fully-contained 11x11 window (sigma 1.5) and
/// needs width, height >= 11; the global mode evaluates the formula once on
/// whole-image statistics.
double ssim(const Image &a, const Image &b, const SsimConfig &cfg = {});

/// Local SSIM values of one channel for every valid 11x11 window position,
/// row-major with (width - 10) columns. Rows are split across OpenMP
/// threads; values are identical to ssim_map_serial.
std::vector<double> ssim_map(const Image &a, const Image &b, int channel,
                             const SsimConfig &cfg = {});
std::vector<double> ssim_map_serial(const Image &a, const Image &b,
                                    int channel, const SsimConfig &cfg = {});

/// Normalized 11x11 Gaussian weights (sigma 1.5), row-major.
const std::vector<double> &gaussian_window();

/// Loads an 8-bit PNG as gray (1 channel) or RGB (3 channels), scaled by
/// 1/255. Alpha is composited away. Throws std::runtime_error.
Image load_png(const std::string &path);

/// Writes an 8-bit gray or RGB PNG, rounding samples to the nearest level.
void save_png(const std::string &path, const Image &image);

}  // namespace hypertune
