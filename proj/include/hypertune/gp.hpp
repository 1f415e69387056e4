#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace hypertune {

/// Squared-exponential kernel with per-dimension length scales.
/// A single length scale is broadcast to every dimension.
struct KernelConfig {
  double signal_variance = 1.0;
  std::vector<double> length_scale{0.2};
  double noise_variance = 1e-6;
  double jitter = 1e-9;

  double length_scale_at(std::size_t dim) const {
    return length_scale.size() == 1 ? length_scale.front()
                                    : length_scale.at(dim);
  }
  /// Throws ValidationError on a non-positive variance/scale/jitter.
  void check() const;
};

/// signal_variance * exp(-1/2 * sum(((x_i - y_i) / l_i)^2)).
double kernel_eval(const KernelConfig &cfg, std::span<const double> x,
                   std::span<const double> y);

/// Predictive distribution at one input. `variance` is sigma^2; take
/// stddev() where a formula needs sigma.
struct Posterior {
  double mean = 0.0;
  double variance = 0.0;

  double stddev() const { return std::sqrt(variance); }
};

/// Exact GP regression on normalized inputs.
///
/// Targets are centred on `prior_mean` and, with two or more observations,
/// divided by their standard deviation (the output scale) before the
/// covariance solve. Posteriors are reported in the original units, so the
/// prior variance far from data is output_scale^2 * (signal + noise).
/// Rows with identical inputs are merged by averaging their targets.
class GpModel {
 public:
  /// Throws IllConditionedError when the Cholesky factorization of
  /// K + (noise + jitter) I fails after three x10 jitter escalations.
  static GpModel fit(const KernelConfig &cfg, double prior_mean,
                     const std::vector<std::vector<double>> &xs,
                     std::span<const double> ys);

  Posterior predict(std::span<const double> x) const;

  /// Log marginal likelihood of the standardized targets.
  double log_marginal_likelihood() const;

  const KernelConfig &kernel() const noexcept { return kernel_; }
  double prior_mean() const noexcept { return prior_mean_; }
  double output_scale() const noexcept { return output_scale_; }
  double effective_jitter() const noexcept { return jitter_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(x_.cols()); }

  /// Merged training inputs (one row per distinct input) and targets.
  const Eigen::MatrixXd &train_x() const noexcept { return x_; }
  const Eigen::VectorXd &train_y() const noexcept { return y_; }
  /// Lower Cholesky factor of K + (noise + jitter) I.
  const Eigen::MatrixXd &factor() const noexcept { return factor_; }
  /// factor^-T factor^-1 (standardized targets).
  const Eigen::VectorXd &alpha() const noexcept { return alpha_; }

  /// Kernel vector between `x` and every training row, written to `out`.
  void cross_covariance(std::span<const double> x,
                        std::span<double> out) const;

 private:
  GpModel() = default;

  KernelConfig kernel_;
  double prior_mean_ = 0.0;
  double output_scale_ = 1.0;
  double jitter_ = 0.0;
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  Eigen::MatrixXd factor_;
  Eigen::VectorXd alpha_;
  double log_det_half_ = 0.0;
};

/// Default candidate length scales for the marginal-likelihood grid search.
inline const std::vector<double> kLengthScaleGrid{0.05, 0.1, 0.2, 0.4, 0.8};

/// Result of a length-scale grid search.
struct LengthScaleChoice {
  std::vector<double> length_scale;
  double log_marginal_likelihood = -std::numeric_limits<double>::infinity();
};

/// Searches the Cartesian product grid^d for the per-dimension length
/// scales maximizing the log marginal likelihood (first maximum in
/// odometer order wins). Configurations that fail to factor are skipped.
/// OpenMP-parallel over grid cells.
LengthScaleChoice select_length_scales(
    const KernelConfig &base, double prior_mean,
    const std::vector<std::vector<double>> &xs, std::span<const double> ys,
    std::span<const double> grid = kLengthScaleGrid);

/// Single-threaded reference for select_length_scales.
LengthScaleChoice select_length_scales_serial(
    const KernelConfig &base, double prior_mean,
    const std::vector<std::vector<double>> &xs, std::span<const double> ys,
    std::span<const double> grid = kLengthScaleGrid);

}  // namespace hypertune
