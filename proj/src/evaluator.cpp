#include "evaluator.hpp"

#include <omp.h>

#include <chrono>
#include <thread>

#include "hypertune/error.hpp"
#include "hypertune/run_result.hpp"

namespace hypertune {

Evaluator::Evaluator(const SearchSpace &space, std::vector<Objective *> pool,
                     History &history, bool memoize)
    : space_(space), pool_(std::move(pool)), history_(history), memoize_(memoize) {
  if (pool_.empty() || !pool_.front()) {
    throw std::invalid_argument("Evaluator needs an objective");
  }
}

Evaluator::Outcome Evaluator::call(Objective &objective, const ParamPoint &point) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.score = objective.evaluate(point);
    out.ok = true;
  } catch (const EvaluationError &e) {
    out.kind = e.kind();
    out.message = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

std::optional<double> Evaluator::commit(const ParamPoint &point,
                                        const Outcome &out) {
  const auto iteration = history_.next_iteration();
  if (out.ok) {
    history_.add({iteration, point, out.score, out.seconds, pool_.front()->id()});
    if (memoize_) cache_.emplace(point, out.score);
    consecutive_failures_ = 0;
    return out.score;
  }
  history_.add_failure({iteration, point, to_string(out.kind), out.message});
  if (++consecutive_failures_ >= kMaxConsecutiveFailures) {
    throw AbortedRun("objective failed " + std::to_string(consecutive_failures_) +
                         " times in a row; last error (" + to_string(out.kind) +
                         "): " + out.message,
                     history_);
  }
  return std::nullopt;
}

std::optional<double> Evaluator::evaluate(const ParamPoint &point) {
  require_valid(space_, point);
  if (memoize_) {
    if (auto it = cache_.find(point); it != cache_.end()) return it->second;
  }
  return commit(point, call(*pool_.front(), point));
}

std::vector<std::optional<double>> Evaluator::evaluate_batch(
    const std::vector<ParamPoint> &points, std::size_t max_calls) {
  std::vector<std::optional<double>> results(points.size());
  // decide which entries need a real call; duplicates inside the batch are
  // called once and share the result
  std::vector<std::size_t> fresh;
  std::vector<std::ptrdiff_t> alias(points.size(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_valid(space_, points[i]);
    if (memoize_) {
      if (auto it = cache_.find(points[i]); it != cache_.end()) {
        results[i] = it->second;
        continue;
      }
      bool dup = false;
      for (std::size_t f : fresh) {
        if (points[f] == points[i]) {
          alias[i] = static_cast<std::ptrdiff_t>(f);
          dup = true;
          break;
        }
      }
      if (dup) continue;
    }
    if (fresh.size() < max_calls) {
      fresh.push_back(i);
    } else {
      alias[i] = -2;  // over budget
    }
  }

  std::vector<Outcome> outcomes(fresh.size());
  if (pool_.front()->concurrent_safe()) {
    Objective &objective = *pool_.front();
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(fresh.size()); ++j) {
      outcomes[static_cast<std::size_t>(j)] =
          call(objective, points[fresh[static_cast<std::size_t>(j)]]);
    }
  } else if (pool_.size() > 1) {
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < pool_.size() && w < fresh.size(); ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t j = w; j < fresh.size(); j += pool_.size()) {
          outcomes[j] = call(*pool_[w], points[fresh[j]]);
        }
      });
    }
    for (auto &t : workers) t.join();
  } else {
    for (std::size_t j = 0; j < fresh.size(); ++j) {
      outcomes[j] = call(*pool_.front(), points[fresh[j]]);
    }
  }

  for (std::size_t j = 0; j < fresh.size(); ++j) {
    results[fresh[j]] = commit(points[fresh[j]], outcomes[j]);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (alias[i] >= 0) results[i] = results[static_cast<std::size_t>(alias[i])];
  }
  return results;
}

}  // namespace hypertune
