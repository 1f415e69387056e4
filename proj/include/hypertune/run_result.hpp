#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "hypertune/history.hpp"

namespace hypertune {

/// What every optimizer returns.
struct RunResult {
  History history;
  std::optional<EvalRecord> best;
};

/// Consecutive objective failures after which a run gives up.
inline constexpr int kMaxConsecutiveFailures = 3;

/// A run stopped because the objective kept failing. Carries everything
/// recorded up to that point.
class AbortedRun : public std::runtime_error {
 public:
  AbortedRun(const std::string &reason, History partial)
      : std::runtime_error(reason), history_(std::move(partial)) {}
  const History &history() const noexcept { return history_; }

 private:
  History history_;
};

}  // namespace hypertune
