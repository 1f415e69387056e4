#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "evaluator.hpp"
#include "hypertune/baselines.hpp"
#include "hypertune/error.hpp"
#include "hypertune/rng.hpp"

namespace hypertune {
namespace {

// Rebuild when the smallest singular value of the edge matrix falls below
// this fraction of rho.
constexpr double kFlatness = 0.05;

struct Simplex {
  std::vector<std::vector<double>> vertices;
  std::vector<double> scores;

  std::size_t best() const {
    return static_cast<std::size_t>(
        std::max_element(scores.begin(), scores.end()) - scores.begin());
  }
  std::size_t worst() const {
    return static_cast<std::size_t>(
        std::min_element(scores.begin(), scores.end()) - scores.begin());
  }
};

}  // namespace

void CobylaConfig::check(std::size_t dims) const {
  if (!(rho_end > 0.0 && rho_end < rho_begin && rho_begin <= 0.5)) {
    throw ValidationError("cobyla: need 0 < rho_end < rho_begin <= 0.5");
  }
  (void)dims;
  if (max_evals < 1) throw ValidationError("cobyla: max_evals must be >= 1");
}

RunResult run_cobyla(const SearchSpace &space, Objective &objective,
                     const CobylaConfig &cfg,
                     const std::function<void(const CobylaStep &)> &observer) {
  const std::size_t d = space.dims();
  cfg.check(d);
  RunResult result;
  Evaluator evaluator(space, {&objective}, result.history, true);
  Rng rng(cfg.seed);

  auto budget_left = [&] { return evaluator.successes() < cfg.max_evals; };
  // failed vertices borrow the base score so they add no slope
  auto score_at = [&](const std::vector<double> &x, double fallback) {
    const auto s = evaluator.evaluate(snap_unit(space, x));
    return s ? *s : fallback;
  };

  // one lattice step per coordinate in normalized units; offsets and steps
  // never go below it, otherwise they would snap back onto the same point
  std::vector<double> floor_step(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    const auto &def = space[c];
    if (def.upper > def.lower) {
      floor_step[c] = static_cast<double>(def.multiple_of) /
                      static_cast<double>(def.upper - def.lower);
    }
  }
  double rho = cfg.rho_begin;
  auto reach = [&](std::size_t c) { return std::max(rho, floor_step[c]); };
  Simplex simplex;
  auto rebuild = [&](std::vector<double> base, double base_score) {
    simplex.vertices.assign(1, base);
    simplex.scores.assign(1, base_score);
    for (std::size_t i = 0; i < d && budget_left(); ++i) {
      auto v = base;
      const double r = reach(i);
      v[i] = base[i] + r <= 1.0 ? base[i] + r : base[i] - r;
      simplex.scores.push_back(score_at(v, base_score));
      simplex.vertices.push_back(std::move(v));
    }
  };
  std::size_t start_index = 0;
  auto notify = [&] {
    if (observer) observer({start_index, rho, simplex.vertices, simplex.scores});
  };

  // a start ends once rho falls below rho_end; leftover budget goes to a
  // fresh start from another seeded random point
  const double lattice = space.lattice_size();
  for (; budget_left() && static_cast<double>(evaluator.cache().size()) < lattice;
       ++start_index) {
    rho = cfg.rho_begin;
    std::vector<double> start(d);
    for (auto &x : start) x = rng.uniform();
    const auto first = evaluator.evaluate(snap_unit(space, start));
    rebuild(start, first.value_or(-std::numeric_limits<double>::infinity()));
    notify();

    while (budget_left() && rho >= cfg.rho_end &&
           simplex.vertices.size() == d + 1) {
      const std::size_t b = simplex.best();
      const auto &xb = simplex.vertices[b];
      const double fb = simplex.scores[b];

      Eigen::MatrixXd edges(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      Eigen::VectorXd rise(static_cast<Eigen::Index>(d));
      for (std::size_t i = 0, row = 0; i < d + 1; ++i) {
        if (i == b) continue;
        for (std::size_t c = 0; c < d; ++c) {
          edges(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) =
              simplex.vertices[i][c] - xb[c];
        }
        rise(static_cast<Eigen::Index>(row)) =
            std::isfinite(simplex.scores[i]) && std::isfinite(fb)
                ? simplex.scores[i] - fb
                : 0.0;
        ++row;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(edges, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.singularValues().minCoeff() < kFlatness * rho) {
        rebuild(xb, fb);
        notify();
        continue;
      }
      const Eigen::VectorXd gradient = svd.solve(rise);
      const double norm = gradient.norm();

      std::vector<double> trial(xb);
      if (norm > 0.0) {
        for (std::size_t c = 0; c < d; ++c) {
          const double g = gradient(static_cast<Eigen::Index>(c));
          trial[c] = std::clamp(xb[c] + rho * g / norm, 0.0, 1.0);
        }
      }
      bool improved = false;
      if (trial != xb) {
        const auto s = evaluator.evaluate(snap_unit(space, trial));
        if (s && *s > fb) {
          const std::size_t w = simplex.worst();
          simplex.vertices[w] = trial;
          simplex.scores[w] = *s;
          improved = true;
        }
      }
      if (!improved) {
        rho *= 0.5;
        if (rho >= cfg.rho_end) rebuild(simplex.vertices[b], fb);
      }
      notify();
    }
  }

  result.best = result.history.best();
  return result;
}

}  // namespace hypertune
