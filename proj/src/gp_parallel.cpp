#include <omp.h>

#include <cmath>

#include "hypertune/error.hpp"
#include "hypertune/gp.hpp"

namespace hypertune {
namespace {

std::size_t grid_cells(std::size_t grid_size, std::size_t dims) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < dims; ++i) cells *= grid_size;
  return cells;
}

std::vector<double> cell_scales(std::span<const double> grid, std::size_t dims,
                                std::size_t cell) {
  std::vector<double> scales(dims);
  for (std::size_t i = dims; i-- > 0;) {
    scales[i] = grid[cell % grid.size()];
    cell /= grid.size();
  }
  return scales;
}

double cell_lml(const KernelConfig &base, double prior_mean,
                const std::vector<std::vector<double>> &xs,
                std::span<const double> ys, std::vector<double> scales) {
  KernelConfig cfg = base;
  cfg.length_scale = std::move(scales);
  try {
    return GpModel::fit(cfg, prior_mean, xs, ys).log_marginal_likelihood();
  } catch (const IllConditionedError &) {
    return -std::numeric_limits<double>::infinity();
  }
}

void check_grid(const std::vector<std::vector<double>> &xs,
                std::span<const double> grid) {
  if (xs.empty()) throw StructuralError("length-scale search: no data");
  if (grid.empty()) throw ValidationError("length-scale search: empty grid");
}

}  // namespace

LengthScaleChoice select_length_scales_serial(
    const KernelConfig &base, double prior_mean,
    const std::vector<std::vector<double>> &xs, std::span<const double> ys,
    std::span<const double> grid) {
  check_grid(xs, grid);
  const std::size_t d = xs.front().size();
  LengthScaleChoice best;
  best.length_scale = base.length_scale;
  const std::size_t cells = grid_cells(grid.size(), d);
  for (std::size_t c = 0; c < cells; ++c) {
    auto scales = cell_scales(grid, d, c);
    const double lml = cell_lml(base, prior_mean, xs, ys, scales);
    if (lml > best.log_marginal_likelihood) {
      best.log_marginal_likelihood = lml;
      best.length_scale = std::move(scales);
    }
  }
  return best;
}

LengthScaleChoice select_length_scales(
    const KernelConfig &base, double prior_mean,
    const std::vector<std::vector<double>> &xs, std::span<const double> ys,
    std::span<const double> grid) {
  check_grid(xs, grid);
  const std::size_t d = xs.front().size();
  const std::size_t cells = grid_cells(grid.size(), d);
  std::vector<double> lml(cells);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells); ++c) {
    const auto cell = static_cast<std::size_t>(c);
    lml[cell] = cell_lml(base, prior_mean, xs, ys, cell_scales(grid, d, cell));
  }
  LengthScaleChoice best;
  best.length_scale = base.length_scale;
  for (std::size_t c = 0; c < cells; ++c) {
    if (lml[c] > best.log_marginal_likelihood) {
      best.log_marginal_likelihood = lml[c];
      best.length_scale = cell_scales(grid, d, c);
    }
  }
  return best;
}

}  // namespace hypertune
