#include "hypertune/history.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hypertune/error.hpp"

namespace hypertune {
namespace {

using ojson = nlohmann::ordered_json;

ojson params_json(const SearchSpace &space, const ParamPoint &p) {
  ojson params = ojson::object();
  for (std::size_t i = 0; i < space.dims(); ++i) params[space[i].name] = p[i];
  return params;
}

ParamPoint params_from_json(const SearchSpace &space, const ojson &params,
                            std::size_t line) {
  if (!params.is_object()) {
    throw ValidationError("line " + std::to_string(line) +
                          ": params is not an object");
  }
  ParamPoint p;
  for (const auto &def : space.params()) {
    auto it = params.find(def.name);
    if (it == params.end() || !it->is_number_integer()) {
      throw ValidationError("line " + std::to_string(line) +
                            ": missing integer param '" + def.name + "'");
    }
    p.values.push_back(it->get<std::int64_t>());
  }
  return p;
}

}  // namespace

void History::bump_iteration(std::uint64_t it) {
  if (it <= last_iteration_) {
    throw ValidationError("iteration " + std::to_string(it) +
                          " does not follow " + std::to_string(last_iteration_));
  }
  last_iteration_ = it;
}

void History::add(EvalRecord record) {
  if (!std::isfinite(record.score)) {
    throw ValidationError("non-finite score at iteration " +
                          std::to_string(record.iteration));
  }
  if (!allow_duplicates_ && contains(record.point)) {
    throw ValidationError("point " + to_string(record.point) +
                          " already evaluated");
  }
  bump_iteration(record.iteration);
  records_.push_back(std::move(record));
}

void History::add_failure(FailureRecord failure) {
  bump_iteration(failure.iteration);
  failures_.push_back(std::move(failure));
}

bool History::contains(const ParamPoint &p) const {
  return std::any_of(records_.begin(), records_.end(),
                     [&](const EvalRecord &r) { return r.point == p; });
}

std::optional<EvalRecord> History::best() const {
  if (records_.empty()) return std::nullopt;
  const EvalRecord *best = &records_.front();
  for (const auto &r : records_) {
    if (r.score > best->score) best = &r;
  }
  return *best;
}

std::vector<double> History::best_so_far() const {
  std::vector<double> trace;
  trace.reserve(records_.size());
  for (const auto &r : records_) {
    trace.push_back(trace.empty() ? r.score : std::max(trace.back(), r.score));
  }
  return trace;
}

double History::total_wall_time() const {
  double total = 0.0;
  for (const auto &r : records_) total += r.wall_time;
  return total;
}

void write_history_jsonl(std::ostream &os, const SearchSpace &space,
                         const History &history) {
  for (const auto &r : history.records()) {
    ojson line;
    line["iteration"] = r.iteration;
    line["params"] = params_json(space, r.point);
    line["score"] = r.score;
    line["objective_id"] = r.objective_id;
    os << line.dump() << '\n';
  }
}

void write_failures_jsonl(std::ostream &os, const SearchSpace &space,
                          const History &history) {
  for (const auto &f : history.failures()) {
    ojson line;
    line["iteration"] = f.iteration;
    line["params"] = params_json(space, f.point);
    line["error"] = f.kind;
    line["message"] = f.message;
    os << line.dump() << '\n';
  }
}

void write_trace_csv(std::ostream &os, const History &history) {
  os << "iteration,score,best_so_far\n";
  const auto trace = history.best_so_far();
  const auto &records = history.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    // reuse the JSON formatter for shortest round-trip doubles
    os << records[i].iteration << ',' << ojson(records[i].score).dump() << ','
       << ojson(trace[i]).dump() << '\n';
  }
}

void write_timings_csv(std::ostream &os, const History &history) {
  os << "iteration,wall_time\n";
  for (const auto &r : history.records()) {
    os << r.iteration << ',' << ojson(r.wall_time).dump() << '\n';
  }
}

History read_history_jsonl(std::istream &records, const SearchSpace &space,
                           std::istream *failures, bool allow_duplicates) {
  struct Entry {
    std::uint64_t iteration;
    bool failed;
    EvalRecord record;
    FailureRecord failure;
  };
  std::vector<Entry> entries;

  auto parse = [&](std::istream &in, bool failed) {
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
      ++line;
      if (text.empty()) continue;
      ojson j;
      try {
        j = ojson::parse(text);
      } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError("line " + std::to_string(line) + ": " + e.what());
      }
      if (!j.contains("iteration") || !j["iteration"].is_number_unsigned()) {
        throw ValidationError("line " + std::to_string(line) +
                              ": missing iteration");
      }
      Entry e{j["iteration"].get<std::uint64_t>(), failed, {}, {}};
      const ParamPoint p =
          params_from_json(space, j.value("params", ojson()), line);
      if (failed) {
        e.failure = {e.iteration, p, j.value("error", std::string()),
                     j.value("message", std::string())};
      } else {
        if (!j.contains("score") || !j["score"].is_number()) {
          throw ValidationError("line " + std::to_string(line) +
                                ": missing numeric score");
        }
        e.record = {e.iteration, p, j["score"].get<double>(), 0.0,
                    j.value("objective_id", std::string())};
      }
      entries.push_back(std::move(e));
    }
  };
  parse(records, false);
  if (failures) parse(*failures, true);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry &a, const Entry &b) {
                     return a.iteration < b.iteration;
                   });
  History history(allow_duplicates);
  for (auto &e : entries) {
    if (e.failed) {
      history.add_failure(std::move(e.failure));
    } else {
      history.add(std::move(e.record));
    }
  }
  return history;
}

std::optional<std::size_t> evaluations_to_reach(const History &history,
                                                double optimum,
                                                double tolerance) {
  const auto &records = history.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].score >= optimum - tolerance) return i + 1;
  }
  return std::nullopt;
}

}  // namespace hypertune
