#include "hypertune/acquisition.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "hypertune/error.hpp"

namespace hypertune {

std::string to_string(AcquisitionKind kind) {
  return kind == AcquisitionKind::ucb ? "ucb" : "pi";
}

AcquisitionKind parse_acquisition_kind(const std::string &text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "ucb") return AcquisitionKind::ucb;
  if (lower == "pi") return AcquisitionKind::pi;
  throw ValidationError("unknown acquisition '" + text + "' (expected ucb or pi)");
}

double ucb(const Posterior &post, double lambda) {
  return post.mean + lambda * post.stddev();
}

double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double probability_of_improvement(const Posterior &post, double incumbent) {
  const double sigma = post.stddev();
  if (sigma == 0.0) return post.mean >= incumbent ? 1.0 : 0.0;
  return standard_normal_cdf((post.mean - incumbent) / sigma);
}

double acquisition_value(const Posterior &post, const AcquisitionConfig &cfg) {
  return cfg.kind == AcquisitionKind::ucb
             ? ucb(post, cfg.lambda)
             : probability_of_improvement(post, cfg.incumbent);
}

std::vector<double> score_lattice_serial(const GpModel &model,
                                         const Lattice &lattice,
                                         const AcquisitionConfig &cfg,
                                         const std::vector<bool> &skip) {
  std::vector<double> scores(lattice.size(),
                             -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (!skip.empty() && skip[i]) continue;
    scores[i] = acquisition_value(model.predict(lattice.unit(i)), cfg);
  }
  return scores;
}

std::size_t argmax_first(const std::vector<double> &scores) {
  std::size_t best = scores.size();
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > best_value) {
      best_value = scores[i];
      best = i;
    }
  }
  if (best == scores.size()) throw ExhaustedSpace();
  return best;
}

std::size_t select_next_index(const GpModel &model, const Lattice &lattice,
                              const AcquisitionConfig &cfg,
                              const std::vector<bool> &visited) {
  if (std::all_of(visited.begin(), visited.end(), [](bool v) { return v; }) &&
      visited.size() == lattice.size()) {
    throw ExhaustedSpace();
  }
  return argmax_first(score_lattice(model, lattice, cfg, visited));
}

ParamPoint select_next(const GpModel &model, const SearchSpace &space,
                       const AcquisitionConfig &cfg,
                       const std::set<ParamPoint> &visited) {
  const Lattice lattice(space);
  std::vector<bool> mask(lattice.size(), false);
  for (const auto &p : visited) mask[space.index_of(p)] = true;
  return lattice.point(select_next_index(model, lattice, cfg, mask));
}

}  // namespace hypertune
