#pragma once

// Brute-force reference implementations. They share no code with the
// library: plain loops over std::vector, no Eigen.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

// Gauss-Jordan inverse with partial pivoting.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const double p = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

inline double se_kernel(double signal, const std::vector<double> &ls,
                        const std::vector<double> &x,
                        const std::vector<double> &y) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double l = ls.size() == 1 ? ls[0] : ls[i];
    r2 += (x[i] - y[i]) * (x[i] - y[i]) / (l * l);
  }
  return signal * std::exp(-0.5 * r2);
}

struct GpPrediction {
  double mean;
  double variance;
};

// Posterior of a zero-mean GP on (y - prior_mean) / scale, reported in
// original units; scale is the population standard deviation of ys when
// there are at least two distinct targets, else 1. Jitter only enters the
// training covariance.
inline GpPrediction naive_gp(double signal, const std::vector<double> &ls,
                             double noise, double jitter, double prior_mean,
                             const Matrix &xs, const std::vector<double> &ys,
                             const std::vector<double> &x) {
  const std::size_t n = xs.size();
  double scale = 1.0;
  if (n >= 2) {
    const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double var = 0.0;
    for (double y : ys) var += (y - mean) * (y - mean);
    var /= n;
    if (var > 0.0) scale = std::sqrt(var);
  }
  Matrix k(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      k[i][j] = se_kernel(signal, ls, xs[i], xs[j]);
    }
    k[i][i] += noise + jitter;
  }
  const Matrix kinv = invert(k);
  std::vector<double> kx(n);
  for (std::size_t i = 0; i < n; ++i) kx[i] = se_kernel(signal, ls, x, xs[i]);
  double mean = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mean += kx[i] * kinv[i][j] * (ys[j] - prior_mean) / scale;
      quad += kx[i] * kinv[i][j] * kx[j];
    }
  }
  const double var = signal + noise - quad;
  return {prior_mean + scale * mean, scale * scale * std::max(var, 0.0)};
}

// Lattice values admitted by one parameter, by filtering every integer.
inline std::vector<std::int64_t> admitted(std::int64_t lower,
                                          std::int64_t upper,
                                          std::int64_t multiple_of) {
  std::vector<std::int64_t> out;
  for (std::int64_t v = lower; v <= upper; ++v) {
    if (((v % multiple_of) + multiple_of) % multiple_of == 0) out.push_back(v);
  }
  return out;
}

// Nearest admitted value to raw after clamping; the smaller one on ties.
inline std::int64_t nearest(double raw, std::int64_t lower, std::int64_t upper,
                            std::int64_t multiple_of) {
  const auto values = admitted(lower, upper, multiple_of);
  const double clamped = std::min(std::max(raw, double(lower)), double(upper));
  std::int64_t best = values.front();
  double best_d = std::abs(clamped - double(best));
  for (auto v : values) {
    const double d = std::abs(clamped - double(v));
    if (d < best_d) {
      best = v;
      best_d = d;
    }
  }
  return best;
}

// Standard normal CDF by Simpson integration of the density from -12.
inline double normal_cdf(double z) {
  const double lo = -12.0;
  const int steps = 200000;
  const double h = (z - lo) / steps;
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double s = pdf(lo) + pdf(z);
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(lo + i * h);
  return s * h / 3.0;
}

}  // namespace oracle
