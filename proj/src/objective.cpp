#include "hypertune/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "child_process.hpp"
#include "hypertune/error.hpp"

namespace hypertune {

std::string ObjectiveSpec::id() const {
  return kind == ObjectiveKind::builtin ? builtin_id : "external";
}

void ObjectiveSpec::check() const {
  if (kind == ObjectiveKind::builtin) {
    if (builtin_id.empty()) throw ValidationError("objective: builtin_id is empty");
    if (!command.empty()) {
      throw ValidationError("objective: builtin objectives take no command");
    }
    const auto &ids = builtin_objective_ids();
    if (std::find(ids.begin(), ids.end(), builtin_id) == ids.end()) {
      throw ValidationError("objective: unknown builtin_id '" + builtin_id + "'");
    }
  } else {
    if (command.empty()) throw ValidationError("objective: command is empty");
    if (!(timeout > 0.0)) throw ValidationError("objective: timeout must be positive");
    if (children < 1) throw ValidationError("objective: children must be >= 1");
  }
}

std::string to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::timeout: return "timeout";
    case FailureKind::process_exit: return "process_exit";
    case FailureKind::malformed: return "malformed";
    case FailureKind::id_mismatch: return "id_mismatch";
    case FailureKind::error_response: return "error_response";
    case FailureKind::spawn: return "spawn";
  }
  return "unknown";
}

const std::vector<std::string> &builtin_objective_ids() {
  static const std::vector<std::string> ids{"sphere", "rastrigin_discrete",
                                            "gan_proxy"};
  return ids;
}

double sphere(const SearchSpace &space, const ParamPoint &point) {
  double s = 0.0;
  for (double u : normalize(space, point)) s += (u - 0.5) * (u - 0.5);
  return -s;
}

double rastrigin_discrete(const SearchSpace &space, const ParamPoint &point) {
  const auto unit = normalize(space, point);
  double s = 10.0 * static_cast<double>(unit.size());
  for (double u : unit) {
    const double z = 10.24 * (u - 0.5);
    s += z * z - 10.0 * std::cos(2.0 * std::numbers::pi * z);
  }
  return -s;
}

double gan_proxy(const ParamPoint &point) {
  static const SearchSpace space = SearchSpace::gan_default();
  require_valid(space, point);
  using C = GanProxyConstants;
  const auto m = static_cast<double>(point[0]);
  const auto n4 = static_cast<double>(point[1]) / 4.0;
  const auto k = static_cast<double>(point[2]);
  const double dm = m - static_cast<double>(C::peak_m);
  const double dn = n4 - static_cast<double>(C::peak_n) / 4.0;
  const double dk = k - static_cast<double>(C::peak_k);
  return -C::a * dm * dm - C::b * dn * dn - C::c * dk * dk +
         C::ripple * std::sin(C::fm * m + C::fn * n4 + C::fk * k);
}

BuiltinObjective::BuiltinObjective(SearchSpace space, std::string builtin_id,
                                   bool negate)
    : space_(std::move(space)), id_(std::move(builtin_id)), negate_(negate) {
  const auto &ids = builtin_objective_ids();
  if (std::find(ids.begin(), ids.end(), id_) == ids.end()) {
    throw ValidationError("unknown builtin objective '" + id_ + "'");
  }
  if (id_ == "gan_proxy" && !(space_ == SearchSpace::gan_default())) {
    throw ValidationError(
        "gan_proxy is defined on m in [2,11], n in [64,256] (multiple of 4), "
        "k in [2,10] only");
  }
}

double BuiltinObjective::evaluate(const ParamPoint &point) {
  double score;
  if (id_ == "sphere") {
    score = sphere(space_, point);
  } else if (id_ == "rastrigin_discrete") {
    score = rastrigin_discrete(space_, point);
  } else {
    score = gan_proxy(point);
  }
  return negate_ ? -score : score;
}

ExternalObjective::ExternalObjective(SearchSpace space, std::string command,
                                     std::chrono::milliseconds timeout,
                                     bool negate)
    : space_(std::move(space)),
      command_(std::move(command)),
      timeout_(timeout),
      negate_(negate) {}

ExternalObjective::~ExternalObjective() { shutdown(); }

std::string ExternalObjective::request_line(std::int64_t id,
                                            const ParamPoint &point) const {
  nlohmann::ordered_json req;
  req["id"] = id;
  auto &params = req["params"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < space_.dims(); ++i) {
    params[space_[i].name] = point[i];
  }
  return req.dump();
}

void ExternalObjective::ensure_running() {
  if (child_ && child_->running()) return;
  child_.reset();
  try {
    child_ = std::make_unique<ChildProcess>(command_);
  } catch (const std::exception &e) {
    throw EvaluationError(FailureKind::spawn, e.what());
  }
  ++spawns_;
}

void ExternalObjective::discard_child() {
  if (!child_) return;
  last_exit_ = child_->kill();
  child_.reset();
}

double ExternalObjective::evaluate(const ParamPoint &point) {
  require_valid(space_, point);
  ensure_running();
  const std::int64_t id = next_id_++;
  const auto deadline = std::chrono::steady_clock::now() + timeout_;

  if (!child_->write_line(request_line(id, point))) {
    discard_child();
    throw EvaluationError(FailureKind::process_exit,
                          "objective process closed its input");
  }

  std::string line;
  for (;;) {
    switch (child_->read_line(line, deadline)) {
      case ChildProcess::ReadStatus::timeout:
        discard_child();
        throw EvaluationError(FailureKind::timeout,
                              "no response within " +
                                  std::to_string(timeout_.count()) + " ms");
      case ChildProcess::ReadStatus::eof:
        discard_child();
        throw EvaluationError(FailureKind::process_exit,
                              "objective process exited (status " +
                                  std::to_string(last_exit_.value_or(-1)) + ")");
      case ChildProcess::ReadStatus::line:
        break;
    }
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }

  nlohmann::json resp;
  try {
    resp = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error &) {
    discard_child();
    throw EvaluationError(FailureKind::malformed,
                          "response is not JSON: " + line.substr(0, 200));
  }
  if (!resp.is_object()) {
    discard_child();
    throw EvaluationError(FailureKind::malformed, "response is not an object");
  }
  auto id_it = resp.find("id");
  if (id_it == resp.end() || !id_it->is_number_integer()) {
    discard_child();
    throw EvaluationError(FailureKind::malformed, "response has no integer id");
  }
  if (id_it->get<std::int64_t>() != id) {
    discard_child();
    throw EvaluationError(FailureKind::id_mismatch,
                          "response id " + std::to_string(id_it->get<std::int64_t>()) +
                              " does not match request id " + std::to_string(id));
  }
  if (auto err = resp.find("error"); err != resp.end()) {
    throw EvaluationError(FailureKind::error_response,
                          err->is_string() ? err->get<std::string>() : err->dump());
  }
  auto score = resp.find("score");
  if (score == resp.end() || !score->is_number() ||
      !std::isfinite(score->get<double>())) {
    discard_child();
    throw EvaluationError(FailureKind::malformed,
                          "response has no finite score");
  }
  const double s = score->get<double>();
  return negate_ ? -s : s;
}

void ExternalObjective::shutdown() {
  if (!child_) return;
  if (child_->running()) {
    child_->write_line(R"({"cmd":"shutdown"})");
    child_->close_input();
    const auto status = child_->wait_until(std::chrono::steady_clock::now() +
                                           std::chrono::seconds(5));
    last_exit_ = status ? *status : child_->kill();
  }
  child_.reset();
}

std::unique_ptr<Objective> make_objective(const ObjectiveSpec &spec,
                                          const SearchSpace &space) {
  spec.check();
  if (spec.kind == ObjectiveKind::builtin) {
    return std::make_unique<BuiltinObjective>(space, spec.builtin_id, spec.negate);
  }
  return std::make_unique<ExternalObjective>(
      space, spec.command,
      std::chrono::milliseconds(static_cast<long long>(spec.timeout * 1000.0)),
      spec.negate);
}

}  // namespace hypertune
