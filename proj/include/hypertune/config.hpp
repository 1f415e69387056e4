#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "hypertune/baselines.hpp"
#include "hypertune/bo.hpp"
#include "hypertune/objective.hpp"
#include "hypertune/search_space.hpp"

namespace hypertune {

enum class OptimizerKind { bo, cobyla, pso, random };

std::string to_string(OptimizerKind kind);
/// Throws ValidationError.
OptimizerKind parse_optimizer_kind(const std::string &text);

/// Everything a run needs. `bo`, `cobyla` and `pso` hold the per-optimizer
/// settings; seed and max_evals are copied into them by the effective_*
/// accessors so the top-level values always win.
struct RunConfig {
  SearchSpace space = SearchSpace::gan_default();
  ObjectiveSpec objective;
  OptimizerKind optimizer = OptimizerKind::bo;
  std::uint64_t seed = 0;
  std::size_t max_evals = 50;
  std::string output_dir = "runs";
  BoConfig bo;
  CobylaConfig cobyla;
  PsoConfig pso;
  /// Score treated as the optimum for iterations-to-optimum; builtin
  /// objectives get it by enumeration when unset.
  std::optional<double> known_optimum;
  double optimum_tolerance = 1e-9;

  BoConfig effective_bo() const;
  CobylaConfig effective_cobyla() const;
  PsoConfig effective_pso() const;

  /// Cross-field checks. Throws ConfigError.
  void check() const;
};

/// Parses the YAML run config. Errors carry "<source>:<line>:<col>: ..."
/// in what() and the position in line()/column().
RunConfig parse_config(const std::string &yaml_text,
                       const std::string &source_name = "<config>");
RunConfig load_config(const std::filesystem::path &path);

/// Full effective configuration as JSON (the config.resolved artifact).
nlohmann::ordered_json resolved_json(const RunConfig &cfg);
/// Inverse of resolved_json. Throws ConfigError.
RunConfig config_from_resolved(const nlohmann::json &j);

}  // namespace hypertune
