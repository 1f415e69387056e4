#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypertune/config.hpp"
#include "hypertune/run_result.hpp"

namespace hypertune {

/// Summary of one optimizer run (report.json).
struct RunReport {
  std::string optimizer;
  std::uint64_t seed = 0;
  std::string objective_id;
  std::size_t budget = 0;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
  std::optional<EvalRecord> best;
  std::vector<double> best_so_far;
  std::optional<double> optimum;
  double optimum_tolerance = 0.0;
  /// Successful evaluations until best_so_far >= optimum - tolerance.
  std::optional<std::size_t> iterations_to_optimum;
  double wall_time_total = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

nlohmann::ordered_json to_json(const RunReport &report, const SearchSpace &space);

struct RunOutcome {
  RunResult result;
  RunReport report;
  /// Directory holding the artifacts; empty when nothing was written.
  std::filesystem::path directory;
};

/// Highest score on the lattice for builtin objectives (after negation), or
/// cfg.known_optimum when set. nullopt for external objectives without one.
std::optional<double> resolve_optimum(const RunConfig &cfg);

/// Runs the configured optimizer in memory. Objective failures that abort
/// the run are reported through report.aborted instead of thrown.
RunOutcome execute(const RunConfig &cfg,
                   std::optional<double> optimum = std::nullopt);

/// Fresh timestamped directory under `base`; never reuses an existing one.
std::filesystem::path make_run_directory(const std::filesystem::path &base,
                                         const std::string &label);

/// Writes history.jsonl, failures.jsonl, trace.csv, timings.csv,
/// report.json and config.resolved into `dir`, plus a FAILED marker for
/// aborted runs.
void write_artifacts(const std::filesystem::path &dir, const RunConfig &cfg,
                     const RunOutcome &outcome);

/// execute + write_artifacts into a new directory under `out_base`.
RunOutcome optimize(const RunConfig &cfg, const std::filesystem::path &out_base);

/// One (optimizer, seed) cell of a comparison.
struct CompareCell {
  OptimizerKind optimizer = OptimizerKind::bo;
  std::uint64_t seed = 0;
  RunReport report;
  std::string error;
};

/// Per-optimizer aggregate. Cells that never reach the optimum count as
/// budget + 1 evaluations.
struct CompareRow {
  OptimizerKind optimizer = OptimizerKind::bo;
  std::size_t cells = 0;
  std::size_t reached = 0;
  double median_iterations = 0.0;
  double q1_iterations = 0.0;
  double q3_iterations = 0.0;
  double median_best = 0.0;
  double q1_best = 0.0;
  double q3_best = 0.0;
};

struct CompareReport {
  std::vector<CompareCell> cells;
  std::vector<CompareRow> rows;
  std::optional<double> optimum;
  std::size_t budget = 0;
  std::filesystem::path directory;
};

/// Linear-interpolation quantile (q in [0,1]) of an unsorted sample.
double quantile(std::vector<double> values, double q);

/// Runs every (optimizer, seed) cell with the same budget, up to `jobs`
/// cells at a time. A failing cell is reported and the rest continue.
/// When `out_base` is non-empty, writes cells.csv, summary.csv,
/// summary.json and traces/<optimizer>_seed<N>.csv under a new directory.
CompareReport compare(const RunConfig &base,
                      const std::vector<OptimizerKind> &optimizers,
                      const std::vector<std::uint64_t> &seeds,
                      std::size_t budget, int jobs,
                      const std::filesystem::path &out_base = {});

struct ReplayResult {
  bool ok = true;
  std::optional<std::uint64_t> divergent_iteration;
  std::string message;
};

/// Re-checks a run directory. Every record must lie on the lattice and
/// trace.csv must hold the running maximum of the scores; for BO runs each
/// proposal is re-derived from the recorded prefix and must match the
/// point that was evaluated.
ReplayResult replay(const std::filesystem::path &run_dir);

}  // namespace hypertune
