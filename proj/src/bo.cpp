#include "hypertune/bo.hpp"

#include "evaluator.hpp"
#include "hypertune/error.hpp"
#include "hypertune/rng.hpp"

namespace hypertune {

void BoConfig::check(double lattice_size) const {
  if (max_iterations < 1) throw ValidationError("bo: max_iterations must be >= 1");
  if (n_initial < 1) throw ValidationError("bo: n_initial must be >= 1");
  if (n_initial > max_iterations) {
    throw ValidationError("bo: n_initial exceeds max_iterations");
  }
  if (lattice_size >= 2 && max_iterations >= 2 && n_initial < 2) {
    throw ValidationError("bo: n_initial must be >= 2 on a lattice with >= 2 points");
  }
  if (refit_period < 1) throw ValidationError("bo: refit_period must be >= 1");
  if (!std::isfinite(acquisition.lambda)) {
    throw ValidationError("bo: lambda must be finite");
  }
  kernel.check();
}

BoProposer::BoProposer(const Lattice &lattice, BoConfig cfg)
    : lattice_(lattice), cfg_(std::move(cfg)), kernel_(cfg_.kernel) {
  Rng rng(cfg_.seed);
  initial_order_ = rng.permutation(lattice_.size());
}

ParamPoint BoProposer::propose(const History &history) {
  const SearchSpace &space = lattice_.space();
  std::vector<bool> visited(lattice_.size(), false);
  for (const auto &f : history.failures()) visited[space.index_of(f.point)] = true;
  std::vector<bool> evaluated(lattice_.size(), false);
  for (const auto &r : history.records()) evaluated[space.index_of(r.point)] = true;

  const std::size_t n_initial = std::min(cfg_.n_initial, lattice_.size());
  if (history.size() < n_initial) {
    for (std::size_t idx : initial_order_) {
      if (!visited[idx] && !evaluated[idx]) return lattice_.point(idx);
    }
    throw ExhaustedSpace();
  }
  if (!cfg_.allow_revisit) {
    for (std::size_t i = 0; i < visited.size(); ++i) {
      if (evaluated[i]) visited[i] = true;
    }
  }

  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  xs.reserve(history.size());
  ys.reserve(history.size());
  double mean = 0.0;
  double incumbent = -std::numeric_limits<double>::infinity();
  for (const auto &r : history.records()) {
    xs.push_back(normalize(space, r.point));
    ys.push_back(r.score);
    mean += r.score;
    incumbent = std::max(incumbent, r.score);
  }
  mean /= static_cast<double>(ys.size());

  if (cfg_.refit_length_scales && ys.size() >= 2 &&
      (!refitted_once_ || ys.size() >= fitted_at_ + cfg_.refit_period)) {
    const auto choice = select_length_scales(cfg_.kernel, mean, xs, ys);
    if (std::isfinite(choice.log_marginal_likelihood)) {
      kernel_.length_scale = choice.length_scale;
    }
    fitted_at_ = ys.size();
    refitted_once_ = true;
  }

  const GpModel model = GpModel::fit(kernel_, mean, xs, ys);
  AcquisitionConfig acq = cfg_.acquisition;
  acq.incumbent = incumbent;
  return lattice_.point(select_next_index(model, lattice_, acq, visited));
}

RunResult run_bo(const SearchSpace &space, Objective &objective,
                 const BoConfig &cfg) {
  const Lattice lattice(space);
  cfg.check(static_cast<double>(lattice.size()));
  BoProposer proposer(lattice, cfg);
  RunResult result{History(cfg.allow_revisit), std::nullopt};
  Evaluator evaluator(space, {&objective}, result.history, false);
  const std::size_t budget =
      cfg.allow_revisit ? cfg.max_iterations
                        : std::min(cfg.max_iterations, lattice.size());
  while (result.history.size() < budget) {
    ParamPoint next;
    try {
      next = proposer.propose(result.history);
    } catch (const ExhaustedSpace &) {
      break;
    }
    evaluator.evaluate(next);
  }
  result.best = result.history.best();
  return result;
}

}  // namespace hypertune
