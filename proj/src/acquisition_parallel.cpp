#include <omp.h>

#include <algorithm>
#include <limits>

#include "hypertune/acquisition.hpp"
#include "hypertune/error.hpp"

namespace hypertune {
namespace {

// Fixed block width keeps results independent of the thread count.
constexpr std::size_t kBlock = 64;

}  // namespace

std::vector<double> score_lattice(const GpModel &model, const Lattice &lattice,
                                  const AcquisitionConfig &cfg,
                                  const std::vector<bool> &skip) {
  if (lattice.dims() != model.dims()) {
    throw StructuralError("lattice and model arity differ");
  }
  if (!skip.empty() && skip.size() != lattice.size()) {
    throw StructuralError("skip mask length differs from lattice size");
  }
  const std::size_t total = lattice.size();
  const std::size_t blocks = (total + kBlock - 1) / kBlock;
  const auto n = static_cast<Eigen::Index>(model.size());
  const double scale2 = model.output_scale() * model.output_scale();
  const double prior_var =
      model.kernel().signal_variance + model.kernel().noise_variance;
  std::vector<double> scores(total, -std::numeric_limits<double>::infinity());

#pragma omp parallel
  {
    Eigen::MatrixXd cross(n, static_cast<Eigen::Index>(kBlock));
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
      const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
      const std::size_t end = std::min(total, begin + kBlock);
      const auto width = static_cast<Eigen::Index>(end - begin);
      auto block = cross.leftCols(width);
      for (Eigen::Index c = 0; c < width; ++c) {
        model.cross_covariance(lattice.unit(begin + static_cast<std::size_t>(c)),
                               {block.col(c).data(), static_cast<std::size_t>(n)});
      }
      const Eigen::VectorXd means = block.transpose() * model.alpha();
      model.factor().triangularView<Eigen::Lower>().solveInPlace(block);
      for (Eigen::Index c = 0; c < width; ++c) {
        const std::size_t i = begin + static_cast<std::size_t>(c);
        if (!skip.empty() && skip[i]) continue;
        Posterior post;
        post.mean = model.prior_mean() + model.output_scale() * means(c);
        post.variance =
            scale2 * std::max(prior_var - block.col(c).squaredNorm(), 0.0);
        scores[i] = acquisition_value(post, cfg);
      }
    }
  }
  return scores;
}

}  // namespace hypertune
