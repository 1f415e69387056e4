#include "hypertune/gp.hpp"

#include <numbers>
#include <string>

#include "hypertune/error.hpp"

namespace hypertune {

void KernelConfig::check() const {
  if (!(signal_variance > 0.0)) {
    throw ValidationError("kernel signal_variance must be positive");
  }
  if (length_scale.empty()) {
    throw ValidationError("kernel needs at least one length scale");
  }
  for (double l : length_scale) {
    if (!(l > 0.0)) throw ValidationError("kernel length scales must be positive");
  }
  if (!(noise_variance >= 0.0)) {
    throw ValidationError("kernel noise_variance must be non-negative");
  }
  if (!(jitter > 0.0)) throw ValidationError("kernel jitter must be positive");
}

double kernel_eval(const KernelConfig &cfg, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size()) {
    throw StructuralError("kernel inputs have different arity");
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = (x[i] - y[i]) / cfg.length_scale_at(i);
    r2 += d * d;
  }
  return cfg.signal_variance * std::exp(-0.5 * r2);
}

GpModel GpModel::fit(const KernelConfig &cfg, double prior_mean,
                     const std::vector<std::vector<double>> &xs,
                     std::span<const double> ys) {
  cfg.check();
  if (xs.size() != ys.size()) {
    throw StructuralError("fit: " + std::to_string(xs.size()) + " inputs but " +
                          std::to_string(ys.size()) + " targets");
  }
  if (xs.empty()) throw StructuralError("fit: no training data");
  const std::size_t d = xs.front().size();
  if (cfg.length_scale.size() != 1 && cfg.length_scale.size() != d) {
    throw StructuralError("fit: length_scale arity does not match inputs");
  }

  // merge duplicate inputs, keeping first-occurrence order
  std::vector<std::size_t> owner(xs.size());
  std::vector<std::size_t> firsts;
  std::vector<double> sums;
  std::vector<int> counts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != d) throw StructuralError("fit: ragged inputs");
    std::size_t slot = firsts.size();
    for (std::size_t j = 0; j < firsts.size(); ++j) {
      if (xs[firsts[j]] == xs[i]) {
        slot = j;
        break;
      }
    }
    if (slot == firsts.size()) {
      firsts.push_back(i);
      sums.push_back(0.0);
      counts.push_back(0);
    }
    sums[slot] += ys[i];
    ++counts[slot];
    owner[i] = slot;
  }

  GpModel model;
  model.kernel_ = cfg;
  model.prior_mean_ = prior_mean;
  const auto n = static_cast<Eigen::Index>(firsts.size());
  model.x_.resize(n, static_cast<Eigen::Index>(d));
  model.y_.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto &row = xs[firsts[static_cast<std::size_t>(r)]];
    for (std::size_t c = 0; c < d; ++c) model.x_(r, static_cast<Eigen::Index>(c)) = row[c];
    model.y_(r) = sums[static_cast<std::size_t>(r)] / counts[static_cast<std::size_t>(r)];
  }

  if (ys.size() >= 2) {
    double mean = 0.0;
    for (double y : ys) mean += y;
    mean /= static_cast<double>(ys.size());
    double var = 0.0;
    for (double y : ys) var += (y - mean) * (y - mean);
    var /= static_cast<double>(ys.size());
    if (var > 0.0) model.output_scale_ = std::sqrt(var);
  }

  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto &xi = xs[firsts[static_cast<std::size_t>(i)]];
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double k =
          kernel_eval(cfg, xi, xs[firsts[static_cast<std::size_t>(j)]]);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }

  double jitter = cfg.jitter;
  for (int attempt = 0; attempt <= 3; ++attempt, jitter *= 10.0) {
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += cfg.noise_variance + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd l = llt.matrixL();
    if ((l.diagonal().array() <= 0.0).any()) continue;
    model.factor_ = std::move(l);
    model.jitter_ = jitter;
    const Eigen::VectorXd centred =
        (model.y_.array() - prior_mean) / model.output_scale_;
    model.alpha_ = llt.solve(centred);
    model.log_det_half_ = model.factor_.diagonal().array().log().sum();
    return model;
  }
  throw IllConditionedError("covariance matrix is not positive definite after "
                            "jitter escalation to " + std::to_string(jitter / 10.0));
}

void GpModel::cross_covariance(std::span<const double> x,
                               std::span<double> out) const {
  const auto d = x_.cols();
  for (Eigen::Index i = 0; i < x_.rows(); ++i) {
    double r2 = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) {
      const double diff =
          (x[static_cast<std::size_t>(c)] - x_(i, c)) /
          kernel_.length_scale_at(static_cast<std::size_t>(c));
      r2 += diff * diff;
    }
    out[static_cast<std::size_t>(i)] = kernel_.signal_variance * std::exp(-0.5 * r2);
  }
}

Posterior GpModel::predict(std::span<const double> x) const {
  if (x.size() != dims()) {
    throw StructuralError("predict: input arity " + std::to_string(x.size()) +
                          ", model arity " + std::to_string(dims()));
  }
  Eigen::VectorXd k(x_.rows());
  cross_covariance(x, {k.data(), static_cast<std::size_t>(k.size())});
  Posterior post;
  post.mean = prior_mean_ + output_scale_ * k.dot(alpha_);
  factor_.triangularView<Eigen::Lower>().solveInPlace(k);
  const double var =
      kernel_.signal_variance + kernel_.noise_variance - k.squaredNorm();
  post.variance = output_scale_ * output_scale_ * std::max(var, 0.0);
  return post;
}

double GpModel::log_marginal_likelihood() const {
  const Eigen::VectorXd centred = (y_.array() - prior_mean_) / output_scale_;
  const double n = static_cast<double>(y_.size());
  return -0.5 * centred.dot(alpha_) - log_det_half_ -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace hypertune
