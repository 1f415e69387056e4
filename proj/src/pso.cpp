#include <algorithm>

#include "evaluator.hpp"
#include "hypertune/baselines.hpp"
#include "hypertune/error.hpp"
#include "hypertune/rng.hpp"

namespace hypertune {

void PsoConfig::check() const {
  if (n_particles < 2) throw ValidationError("pso: n_particles must be >= 2");
  if (!(inertia > 0.0 && inertia < 1.0)) {
    throw ValidationError("pso: inertia must lie in (0, 1)");
  }
  if (!(cognitive > 0.0) || !(social > 0.0)) {
    throw ValidationError("pso: cognitive and social must be positive");
  }
  if (!(v_max > 0.0)) throw ValidationError("pso: v_max must be positive");
  if (max_iters < 1 || max_evals < 1) {
    throw ValidationError("pso: max_iters and max_evals must be >= 1");
  }
}

void pso_update(Particle &p, std::span<const double> global_best,
                const PsoConfig &cfg, std::span<const double> r1,
                std::span<const double> r2) {
  for (std::size_t c = 0; c < p.position.size(); ++c) {
    const double x = p.position[c];
    double v = cfg.inertia * p.velocity[c];
    if (!p.best_position.empty()) v += cfg.cognitive * r1[c] * (p.best_position[c] - x);
    if (!global_best.empty()) v += cfg.social * r2[c] * (global_best[c] - x);
    v = std::clamp(v, -cfg.v_max, cfg.v_max);
    p.velocity[c] = v;
    p.position[c] = std::clamp(x + v, 0.0, 1.0);
  }
}

RunResult run_pso(const SearchSpace &space, Objective &objective,
                  const PsoConfig &cfg,
                  const std::function<void(const PsoStep &)> &observer) {
  return run_pso(space, std::vector<Objective *>{&objective}, cfg, observer);
}

RunResult run_pso(const SearchSpace &space, std::vector<Objective *> pool,
                  const PsoConfig &cfg,
                  const std::function<void(const PsoStep &)> &observer) {
  cfg.check();
  const std::size_t d = space.dims();
  RunResult result{History(!cfg.memoize), std::nullopt};
  Evaluator evaluator(space, std::move(pool), result.history, cfg.memoize);
  Rng rng(cfg.seed);

  std::vector<Particle> swarm(cfg.n_particles);
  for (auto &p : swarm) {
    p.position.resize(d);
    p.velocity.resize(d);
    for (auto &x : p.position) x = rng.uniform();
    for (auto &v : p.velocity) v = rng.uniform(-cfg.v_max, cfg.v_max);
  }
  std::vector<double> global_best;
  double global_score = -std::numeric_limits<double>::infinity();
  std::vector<double> r1(d), r2(d);

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const std::size_t used = evaluator.successes();
    if (used >= cfg.max_evals) break;
    std::vector<ParamPoint> points;
    points.reserve(swarm.size());
    for (const auto &p : swarm) points.push_back(snap_unit(space, p.position));
    const auto scores = evaluator.evaluate_batch(points, cfg.max_evals - used);

    for (std::size_t i = 0; i < swarm.size(); ++i) {
      if (!scores[i]) continue;
      auto &p = swarm[i];
      if (*scores[i] > p.best_score) {
        p.best_score = *scores[i];
        p.best_position = p.position;
      }
      if (*scores[i] > global_score) {
        global_score = *scores[i];
        global_best = p.position;
      }
    }
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        r1[c] = rng.uniform();
        r2[c] = rng.uniform();
      }
      if (scores[i]) pso_update(swarm[i], global_best, cfg, r1, r2);
    }
    if (observer) observer({it, swarm, global_score});
  }

  result.best = result.history.best();
  return result;
}

RunResult run_random(const SearchSpace &space, Objective &objective,
                     std::size_t max_evals, std::uint64_t seed) {
  const Lattice lattice(space);
  RunResult result;
  Evaluator evaluator(space, {&objective}, result.history, false);
  Rng rng(seed);
  for (std::size_t idx : rng.permutation(lattice.size())) {
    if (evaluator.successes() >= max_evals) break;
    evaluator.evaluate(lattice.point(idx));
  }
  result.best = result.history.best();
  return result;
}

}  // namespace hypertune
