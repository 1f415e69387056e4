#pragma once

#include <cstdint>
#include <vector>

#include "hypertune/acquisition.hpp"
#include "hypertune/gp.hpp"
#include "hypertune/history.hpp"
#include "hypertune/objective.hpp"
#include "hypertune/run_result.hpp"
#include "hypertune/search_space.hpp"

namespace hypertune {

struct BoConfig {
  std::size_t max_iterations = 50;
  /// Size of the seeded random initial design.
  std::size_t n_initial = 3;
  std::uint64_t seed = 42;
  AcquisitionConfig acquisition;
  KernelConfig kernel;
  /// Length scales are re-selected by marginal likelihood once this many
  /// new observations have arrived since the last selection.
  std::size_t refit_period = 5;
  bool refit_length_scales = true;
  /// Lets acquisition pick already-evaluated points (stochastic objectives).
  bool allow_revisit = false;

  /// Throws ValidationError.
  void check(double lattice_size) const;
};

/// Decides the next point to evaluate from the history so far.
///
/// The first n_initial proposals walk a seeded permutation of the lattice;
/// after that a GP is fitted to every successful record (prior mean = mean
/// observed score) and the acquisition argmax over unvisited lattice points
/// is returned. Points that failed are never proposed again.
///
/// Proposals depend only on the config and the sequence of histories passed
/// in, so feeding the recorded prefixes of a run back in reproduces its
/// decisions.
class BoProposer {
 public:
  BoProposer(const Lattice &lattice, BoConfig cfg);

  /// Throws ExhaustedSpace when nothing is left to propose.
  ParamPoint propose(const History &history);

  /// Kernel used for the most recent GP fit.
  const KernelConfig &kernel() const noexcept { return kernel_; }

 private:
  const Lattice &lattice_;
  BoConfig cfg_;
  std::vector<std::size_t> initial_order_;
  KernelConfig kernel_;
  std::size_t fitted_at_ = 0;
  bool refitted_once_ = false;
};

/// Sequential BO loop: propose, evaluate, record, until
/// min(max_iterations, lattice size) successful evaluations or the lattice
/// runs out. A failed evaluation is recorded and the next proposal
/// re-runs the acquisition without that point; three failures in a row throw
/// AbortedRun.
RunResult run_bo(const SearchSpace &space, Objective &objective,
                 const BoConfig &cfg);

}  // namespace hypertune
