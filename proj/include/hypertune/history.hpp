#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypertune/search_space.hpp"

namespace hypertune {

/// One successful objective call. Scores are always in maximize
/// orientation.
struct EvalRecord {
  std::uint64_t iteration = 0;
  ParamPoint point;
  double score = 0.0;
  double wall_time = 0.0;
  std::string objective_id;
};

/// One failed objective call; `kind` is a short machine-readable tag
/// (timeout, process_exit, malformed, id_mismatch, error_response, ...).
struct FailureRecord {
  std::uint64_t iteration = 0;
  ParamPoint point;
  std::string kind;
  std::string message;
};

/// Ordered evaluation log shared by every optimizer.
///
/// Iteration numbers are 1-based attempt counters over successes and
/// failures together, so they strictly increase across both lists.
class History {
 public:
  explicit History(bool allow_duplicates = false)
      : allow_duplicates_(allow_duplicates) {}

  /// Throws ValidationError on a non-finite score, a non-increasing
  /// iteration, or (unless duplicates are allowed) a repeated point.
  void add(EvalRecord record);
  void add_failure(FailureRecord failure);

  const std::vector<EvalRecord> &records() const noexcept { return records_; }
  const std::vector<FailureRecord> &failures() const noexcept { return failures_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  bool allow_duplicates() const noexcept { return allow_duplicates_; }

  /// Next unused iteration number.
  std::uint64_t next_iteration() const noexcept { return last_iteration_ + 1; }

  bool contains(const ParamPoint &p) const;

  /// Highest score, earliest iteration on ties. Empty history -> nullopt.
  std::optional<EvalRecord> best() const;

  /// Running maximum of the score column.
  std::vector<double> best_so_far() const;

  double total_wall_time() const;

 private:
  void bump_iteration(std::uint64_t it);

  bool allow_duplicates_;
  std::uint64_t last_iteration_ = 0;
  std::vector<EvalRecord> records_;
  std::vector<FailureRecord> failures_;
};

/// history.jsonl: {"iteration":I,"params":{...},"score":S,"objective_id":ID}
/// per line. Wall times are left out so that identical runs serialize to
/// identical bytes; they go to the timings file instead.
void write_history_jsonl(std::ostream &os, const SearchSpace &space,
                         const History &history);
void write_failures_jsonl(std::ostream &os, const SearchSpace &space,
                          const History &history);
/// iteration,score,best_so_far
void write_trace_csv(std::ostream &os, const History &history);
/// iteration,wall_time
void write_timings_csv(std::ostream &os, const History &history);

/// Parses history.jsonl (and optionally failures.jsonl) back into a
/// History. Throws ValidationError with a 1-based line number on bad input.
History read_history_jsonl(std::istream &records, const SearchSpace &space,
                           std::istream *failures = nullptr,
                           bool allow_duplicates = false);

/// 1-based evaluation count at which the running best first reaches
/// `optimum - tolerance`; nullopt when it never does.
std::optional<std::size_t> evaluations_to_reach(const History &history,
                                                double optimum,
                                                double tolerance);

}  // namespace hypertune
