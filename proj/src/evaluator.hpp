#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hypertune/history.hpp"
#include "hypertune/objective.hpp"

namespace hypertune {

/// Runs objective calls on behalf of an optimizer: times them, appends a
/// record or failure to the history, applies the consecutive-failure abort
/// rule, and optionally answers repeated points from a cache without
/// calling the objective again.
class Evaluator {
 public:
  /// `pool` holds one objective or several interchangeable instances
  /// (separate child processes) used by evaluate_batch.
  Evaluator(const SearchSpace &space, std::vector<Objective *> pool,
            History &history, bool memoize);

  /// nullopt when the call failed. Throws AbortedRun.
  std::optional<double> evaluate(const ParamPoint &point);

  /// Evaluates up to `max_calls` uncached points concurrently when the
  /// objective allows it; results are recorded in input order. Entries
  /// beyond the call budget come back as nullopt and are not recorded.
  std::vector<std::optional<double>> evaluate_batch(
      const std::vector<ParamPoint> &points, std::size_t max_calls);

  /// Number of successful records so far.
  std::size_t successes() const { return history_.size(); }
  const std::map<ParamPoint, double> &cache() const { return cache_; }

 private:
  struct Outcome {
    bool ok = false;
    double score = 0.0;
    double seconds = 0.0;
    FailureKind kind = FailureKind::malformed;
    std::string message;
  };
  static Outcome call(Objective &objective, const ParamPoint &point);
  std::optional<double> commit(const ParamPoint &point, const Outcome &out);

  const SearchSpace &space_;
  std::vector<Objective *> pool_;
  History &history_;
  bool memoize_;
  std::map<ParamPoint, double> cache_;
  int consecutive_failures_ = 0;
};

}  // namespace hypertune
