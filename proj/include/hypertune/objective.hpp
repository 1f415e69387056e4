#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypertune/search_space.hpp"

namespace hypertune {

enum class ObjectiveKind { builtin, external };

/// What to optimize. Builtins are pure functions of the lattice point;
/// external objectives run `command` through /bin/sh and talk to it over
/// newline-delimited JSON on its stdin/stdout.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::builtin;
  std::string builtin_id = "gan_proxy";
  std::string command;
  /// Flip the sign of every score (use for losses).
  bool negate = false;
  /// Per-evaluation limit for external objectives, in seconds.
  double timeout = 600.0;
  /// Number of child processes for batch evaluation (PSO only).
  int children = 1;

  std::string id() const;
  /// Throws ValidationError.
  void check() const;
};

enum class FailureKind {
  timeout,
  process_exit,
  malformed,
  id_mismatch,
  error_response,
  spawn,
};

std::string to_string(FailureKind kind);

/// A single objective call failed. Optimizers record these and move on.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(FailureKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  FailureKind kind() const noexcept { return kind_; }

 private:
  FailureKind kind_;
};

/// Scored black box in maximize orientation.
class Objective {
 public:
  virtual ~Objective() = default;

  /// Throws EvaluationError when the evaluation fails.
  virtual double evaluate(const ParamPoint &point) = 0;
  virtual std::string id() const = 0;
  /// True when evaluate() may run concurrently on one instance.
  virtual bool concurrent_safe() const { return false; }
  virtual void shutdown() {}
};

/// Identifiers accepted as ObjectiveSpec::builtin_id.
const std::vector<std::string> &builtin_objective_ids();

/// -sum((u_i - 0.5)^2) over normalized coordinates.
double sphere(const SearchSpace &space, const ParamPoint &point);

/// Negated Rastrigin with normalized coordinates mapped onto [-5.12, 5.12].
/// Maximal at the centre of the box.
double rastrigin_discrete(const SearchSpace &space, const ParamPoint &point);

/// Coefficients of the GAN-proxy landscape
///   -a (m-3)^2 - b ((n-140)/4)^2 - c (k-3)^2
///   + ripple * sin(fm m + fn n/4 + fk k).
/// 2 * ripple < min(a, b, c), which makes (3, 140, 3) the unique argmax.
struct GanProxyConstants {
  static constexpr std::int64_t peak_m = 3;
  static constexpr std::int64_t peak_n = 140;
  static constexpr std::int64_t peak_k = 3;
  static constexpr double a = 1.0;
  static constexpr double b = 0.1;
  static constexpr double c = 1.0;
  static constexpr double ripple = 0.04;
  static constexpr double fm = 1.3;
  static constexpr double fn = 0.7;
  static constexpr double fk = 1.9;
};

/// Throws ValidationError unless `point` lies on the default (m, n, k)
/// lattice.
double gan_proxy(const ParamPoint &point);

class BuiltinObjective final : public Objective {
 public:
  /// Throws ValidationError for an unknown id, or when gan_proxy is asked
  /// to run on a space other than the default lattice.
  BuiltinObjective(SearchSpace space, std::string builtin_id, bool negate);

  double evaluate(const ParamPoint &point) override;
  std::string id() const override { return id_; }
  bool concurrent_safe() const override { return true; }

 private:
  SearchSpace space_;
  std::string id_;
  bool negate_;
};

class ChildProcess;

/// Line-protocol client for a child process.
///
/// request  {"id":<int>,"params":{"<name>":<int>,...}}
/// response {"id":<int>,"score":<float>} or {"id":<int>,"error":"<msg>"}
/// shutdown {"cmd":"shutdown"}
///
/// One request is in flight at a time. After a timeout, malformed line or
/// id mismatch the child is killed and respawned on the next call; an
/// error response leaves it running.
class ExternalObjective final : public Objective {
 public:
  ExternalObjective(SearchSpace space, std::string command,
                    std::chrono::milliseconds timeout, bool negate);
  ~ExternalObjective() override;
  ExternalObjective(const ExternalObjective &) = delete;
  ExternalObjective &operator=(const ExternalObjective &) = delete;

  double evaluate(const ParamPoint &point) override;
  std::string id() const override { return "external"; }
  /// Sends the shutdown line and waits briefly for the child to exit,
  /// killing it otherwise.
  void shutdown() override;

  /// Exit status of the most recently reaped child, if any. -1 when it was
  /// killed by a signal.
  std::optional<int> last_exit_status() const noexcept { return last_exit_; }
  /// Number of child processes started so far.
  int spawn_count() const noexcept { return spawns_; }
  /// The exact request line that would be sent for `point` with `id`.
  std::string request_line(std::int64_t id, const ParamPoint &point) const;

 private:
  void ensure_running();
  void discard_child();

  SearchSpace space_;
  std::string command_;
  std::chrono::milliseconds timeout_;
  bool negate_;
  std::unique_ptr<ChildProcess> child_;
  std::int64_t next_id_ = 1;
  std::optional<int> last_exit_;
  int spawns_ = 0;
};

std::unique_ptr<Objective> make_objective(const ObjectiveSpec &spec,
                                          const SearchSpace &space);

}  // namespace hypertune
