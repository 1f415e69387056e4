#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "hypertune/objective.hpp"
#include "hypertune/run_result.hpp"
#include "hypertune/search_space.hpp"

namespace hypertune {

// Both baselines search the unit cube [0,1]^d and evaluate the lattice point
// nearest to each trial (snap_unit). Deterministic objectives are memoized:
// revisiting a lattice point reuses its score and does not count against
// max_evals, so the budget is spent on distinct evaluations just like BO.

/// Linear-approximation trust-region search over a maintained simplex.
struct CobylaConfig {
  /// Initial and final trust radius, normalized units.
  double rho_begin = 0.25;
  double rho_end = 1e-3;
  std::size_t max_evals = 100;
  std::uint64_t seed = 0;

  /// Throws ValidationError. Requires 0 < rho_end < rho_begin <= 0.5 and
  /// max_evals >= 1. Budgets below dims + 2 end before the first
  /// simplex is complete.
  void check(std::size_t dims) const;
};

/// Snapshot handed to an observer after every COBYLA step.
struct CobylaStep {
  std::size_t start = 0;
  double rho = 0.0;
  std::vector<std::vector<double>> simplex;
  std::vector<double> scores;
};

/// Starts from a seeded random vertex and an axis simplex of size rho. Each
/// step fits the linear interpolant through the d+1 vertices, moves from the
/// best vertex a distance rho along its gradient (clipped to the cube) and
/// evaluates there. An improvement replaces the worst vertex; otherwise rho
/// halves and the simplex is rebuilt around the best vertex. A simplex that
/// has become too flat is rebuilt at the current radius. Once rho < rho_end
/// the search restarts from a new seeded point with rho_begin, until the
/// budget is spent.
RunResult run_cobyla(const SearchSpace &space, Objective &objective,
                     const CobylaConfig &cfg,
                     const std::function<void(const CobylaStep &)> &observer = {});

struct PsoConfig {
  std::size_t n_particles = 8;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  std::size_t max_iters = 500;
  std::size_t max_evals = 100;
  std::uint64_t seed = 0;
  /// Per-coordinate velocity clamp, normalized units.
  double v_max = 0.25;
  /// Memoize lattice evaluations. Turn off for stochastic objectives.
  bool memoize = true;

  /// Throws ValidationError. Requires n_particles >= 2, inertia in (0,1),
  /// positive cognitive/social/v_max.
  void check() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_score = -std::numeric_limits<double>::infinity();
};

/// One velocity/position update:
///   v <- inertia v + cognitive r1 (pbest - x) + social r2 (gbest - x)
/// with v clamped to +-v_max and x clipped to [0,1]. r1/r2 hold one draw per
/// coordinate.
void pso_update(Particle &p, std::span<const double> global_best,
                const PsoConfig &cfg, std::span<const double> r1,
                std::span<const double> r2);

struct PsoStep {
  std::size_t iteration = 0;
  std::vector<Particle> swarm;
  double global_best = -std::numeric_limits<double>::infinity();
};

/// Global-best PSO. Each iteration evaluates every particle (concurrently
/// when the objective allows), records results in particle order, updates
/// personal and global bests, then moves the swarm. A particle whose
/// evaluation failed keeps its state for that iteration.
RunResult run_pso(const SearchSpace &space, Objective &objective,
                  const PsoConfig &cfg,
                  const std::function<void(const PsoStep &)> &observer = {});

/// Same as run_pso, spreading each iteration's evaluations over several
/// interchangeable objective instances (one child process each).
RunResult run_pso(const SearchSpace &space, std::vector<Objective *> pool,
                  const PsoConfig &cfg,
                  const std::function<void(const PsoStep &)> &observer = {});

/// Debug baseline: lattice points in seeded random order, no repeats.
RunResult run_random(const SearchSpace &space, Objective &objective,
                     std::size_t max_evals, std::uint64_t seed);

}  // namespace hypertune
