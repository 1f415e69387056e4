#include <omp.h>

#include <cmath>

#include "hypertune/error.hpp"
#include "hypertune/image_metrics.hpp"

namespace hypertune {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

void require_window_fits(const Image &a, const Image &b, int channel) {
  a.check();
  b.check();
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw StructuralError("image shapes differ");
  }
  if (channel < 0 || channel >= a.channels) {
    throw StructuralError("channel out of range");
  }
  if (a.width < kWindow || a.height < kWindow) {
    throw ValidationError("image smaller than the 11x11 SSIM window");
  }
}

double local_ssim(const Image &a, const Image &b, int channel, int x0, int y0,
                  const SsimConfig &cfg) {
  const auto &w = gaussian_window();
  double ma = 0.0, mb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  for (int dy = 0; dy < kWindow; ++dy) {
    for (int dx = 0; dx < kWindow; ++dx) {
      const double wt = w[static_cast<std::size_t>(dy * kWindow + dx)];
      const double va = a.at(x0 + dx, y0 + dy, channel);
      const double vb = b.at(x0 + dx, y0 + dy, channel);
      ma += wt * va;
      mb += wt * vb;
      saa += wt * (va * va);
      sbb += wt * (vb * vb);
      sab += wt * (va * vb);
    }
  }
  const double var_a = saa - ma * ma;
  const double var_b = sbb - mb * mb;
  const double cov = sab - ma * mb;
  return ((2.0 * ma * mb + cfg.c1) * (2.0 * cov + cfg.c2)) /
         ((ma * ma + mb * mb + cfg.c1) * (var_a + var_b + cfg.c2));
}

}  // namespace

const std::vector<double> &gaussian_window() {
  static const std::vector<double> weights = [] {
    std::vector<double> w(kWindow * kWindow);
    const int r = kWindow / 2;
    double sum = 0.0;
    for (int y = -r; y <= r; ++y) {
      for (int x = -r; x <= r; ++x) {
        const double v = std::exp(-(x * x + y * y) / (2.0 * kSigma * kSigma));
        w[static_cast<std::size_t>((y + r) * kWindow + (x + r))] = v;
        sum += v;
      }
    }
    for (auto &v : w) v /= sum;
    return w;
  }();
  return weights;
}

std::vector<double> ssim_map_serial(const Image &a, const Image &b, int channel,
                                    const SsimConfig &cfg) {
  require_window_fits(a, b, channel);
  const int cols = a.width - kWindow + 1;
  const int rows = a.height - kWindow + 1;
  std::vector<double> map(static_cast<std::size_t>(cols) * rows);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      map[static_cast<std::size_t>(y) * cols + x] = local_ssim(a, b, channel, x, y, cfg);
    }
  }
  return map;
}

std::vector<double> ssim_map(const Image &a, const Image &b, int channel,
                             const SsimConfig &cfg) {
  require_window_fits(a, b, channel);
  const int cols = a.width - kWindow + 1;
  const int rows = a.height - kWindow + 1;
  std::vector<double> map(static_cast<std::size_t>(cols) * rows);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      map[static_cast<std::size_t>(y) * cols + x] = local_ssim(a, b, channel, x, y, cfg);
    }
  }
  return map;
}

}  // namespace hypertune
