#pragma once

#include <set>
#include <string>
#include <vector>

#include "hypertune/gp.hpp"
#include "hypertune/search_space.hpp"

namespace hypertune {

enum class AcquisitionKind { ucb, pi };

std::string to_string(AcquisitionKind kind);
/// Accepts "ucb" / "pi" (case-insensitive). Throws ValidationError.
AcquisitionKind parse_acquisition_kind(const std::string &text);

struct AcquisitionConfig {
  AcquisitionKind kind = AcquisitionKind::ucb;
  double lambda = 1.0;
  /// Best observed score; only read by PI.
  double incumbent = 0.0;
};

/// mean + lambda * sigma.
double ucb(const Posterior &post, double lambda);

/// Phi((mean - incumbent) / sigma). With sigma == 0 this is the step
/// function: 1 when mean >= incumbent, else 0.
double probability_of_improvement(const Posterior &post, double incumbent);

/// Standard normal CDF via erfc.
double standard_normal_cdf(double z);

double acquisition_value(const Posterior &post, const AcquisitionConfig &cfg);

/// Acquisition value of every lattice point, in lattice order. Points whose
/// `skip` entry is true get -infinity and are not evaluated. `skip` may be
/// empty. Candidates are processed in fixed-size blocks across OpenMP
/// threads, so the output does not depend on the thread count.
std::vector<double> score_lattice(const GpModel &model, const Lattice &lattice,
                                  const AcquisitionConfig &cfg,
                                  const std::vector<bool> &skip = {});

/// One predict() per candidate, single-threaded. Reference for
/// score_lattice; agrees to rounding.
std::vector<double> score_lattice_serial(const GpModel &model,
                                         const Lattice &lattice,
                                         const AcquisitionConfig &cfg,
                                         const std::vector<bool> &skip = {});

/// Index of the largest finite score; the first index wins ties.
/// Throws ExhaustedSpace when every entry is -infinity.
std::size_t argmax_first(const std::vector<double> &scores);

/// Lattice index of the unvisited point maximizing the acquisition.
/// `visited` is indexed by lattice position. Throws ExhaustedSpace.
std::size_t select_next_index(const GpModel &model, const Lattice &lattice,
                              const AcquisitionConfig &cfg,
                              const std::vector<bool> &visited);

/// Convenience overload over a SearchSpace and a set of visited points.
ParamPoint select_next(const GpModel &model, const SearchSpace &space,
                       const AcquisitionConfig &cfg,
                       const std::set<ParamPoint> &visited);

}  // namespace hypertune
