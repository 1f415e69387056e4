#include "hypertune/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "hypertune/error.hpp"

namespace hypertune {
namespace {

using ojson = nlohmann::ordered_json;

ojson record_json(const EvalRecord &r, const SearchSpace &space) {
  ojson params = ojson::object();
  for (std::size_t i = 0; i < space.dims(); ++i) params[space[i].name] = r.point[i];
  return {{"iteration", r.iteration},
          {"params", params},
          {"score", r.score},
          {"objective_id", r.objective_id}};
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

template <typename Fn>
void write_with(const std::filesystem::path &path, Fn &&fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  fn(out);
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult dispatch(const RunConfig &cfg, Objective &objective,
                   const std::vector<std::unique_ptr<Objective>> &extra) {
  switch (cfg.optimizer) {
    case OptimizerKind::bo:
      return run_bo(cfg.space, objective, cfg.effective_bo());
    case OptimizerKind::cobyla:
      return run_cobyla(cfg.space, objective, cfg.effective_cobyla());
    case OptimizerKind::pso: {
      std::vector<Objective *> pool{&objective};
      for (const auto &o : extra) pool.push_back(o.get());
      return run_pso(cfg.space, pool, cfg.effective_pso());
    }
    case OptimizerKind::random:
      return run_random(cfg.space, objective, cfg.max_evals, cfg.seed);
  }
  throw std::logic_error("unhandled optimizer");
}

}  // namespace

ojson to_json(const RunReport &report, const SearchSpace &space) {
  ojson j;
  j["optimizer"] = report.optimizer;
  j["seed"] = report.seed;
  j["objective_id"] = report.objective_id;
  j["budget"] = report.budget;
  j["evaluations"] = report.evaluations;
  j["failures"] = report.failures;
  j["best"] = report.best ? record_json(*report.best, space) : ojson(nullptr);
  j["best_so_far"] = report.best_so_far;
  j["optimum"] = report.optimum ? ojson(*report.optimum) : ojson(nullptr);
  j["optimum_tolerance"] = report.optimum_tolerance;
  j["iterations_to_optimum"] = report.iterations_to_optimum
                                   ? ojson(*report.iterations_to_optimum)
                                   : ojson(nullptr);
  j["wall_time_total"] = report.wall_time_total;
  j["aborted"] = report.aborted;
  j["abort_reason"] = report.abort_reason;
  return j;
}

std::optional<double> resolve_optimum(const RunConfig &cfg) {
  if (cfg.known_optimum) return cfg.known_optimum;
  if (cfg.objective.kind != ObjectiveKind::builtin) return std::nullopt;
  if (cfg.space.lattice_size() > kDefaultEnumerationCap) return std::nullopt;
  BuiltinObjective objective(cfg.space, cfg.objective.builtin_id, cfg.objective.negate);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto &p : enumerate(cfg.space)) best = std::max(best, objective.evaluate(p));
  return best;
}

RunOutcome execute(const RunConfig &cfg, std::optional<double> optimum) {
  cfg.check();
  if (!optimum) optimum = resolve_optimum(cfg);
  RunOutcome out;
  auto objective = make_objective(cfg.objective, cfg.space);
  std::vector<std::unique_ptr<Objective>> extra;
  if (cfg.optimizer == OptimizerKind::pso &&
      cfg.objective.kind == ObjectiveKind::external) {
    for (int i = 1; i < cfg.objective.children; ++i) {
      extra.push_back(make_objective(cfg.objective, cfg.space));
    }
  }
  try {
    out.result = dispatch(cfg, *objective, extra);
  } catch (const AbortedRun &e) {
    out.result.history = e.history();
    out.result.best = e.history().best();
    out.report.aborted = true;
    out.report.abort_reason = e.what();
  }
  objective->shutdown();
  for (auto &o : extra) o->shutdown();

  auto &r = out.report;
  r.optimizer = to_string(cfg.optimizer);
  r.seed = cfg.seed;
  r.objective_id = cfg.objective.id();
  r.budget = cfg.max_evals;
  r.evaluations = out.result.history.size();
  r.failures = out.result.history.failures().size();
  r.best = out.result.best;
  r.best_so_far = out.result.history.best_so_far();
  r.optimum = optimum;
  r.optimum_tolerance = cfg.optimum_tolerance;
  if (optimum) {
    r.iterations_to_optimum =
        evaluations_to_reach(out.result.history, *optimum, cfg.optimum_tolerance);
  }
  r.wall_time_total = out.result.history.total_wall_time();
  return out;
}

std::filesystem::path make_run_directory(const std::filesystem::path &base,
                                         const std::string &label) {
  std::filesystem::create_directories(base);
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  const std::string stem = label + "-" + stamp;
  for (int n = 0;; ++n) {
    auto dir = base / (n == 0 ? stem : stem + "-" + std::to_string(n));
    if (std::filesystem::create_directory(dir)) return dir;
  }
}

void write_artifacts(const std::filesystem::path &dir, const RunConfig &cfg,
                     const RunOutcome &outcome) {
  const auto &h = outcome.result.history;
  write_with(dir / "history.jsonl",
             [&](std::ostream &os) { write_history_jsonl(os, cfg.space, h); });
  write_with(dir / "failures.jsonl",
             [&](std::ostream &os) { write_failures_jsonl(os, cfg.space, h); });
  write_with(dir / "trace.csv", [&](std::ostream &os) { write_trace_csv(os, h); });
  write_with(dir / "timings.csv", [&](std::ostream &os) { write_timings_csv(os, h); });
  write_file(dir / "report.json", to_json(outcome.report, cfg.space).dump(2) + "\n");
  write_file(dir / "config.resolved", resolved_json(cfg).dump(2) + "\n");
  if (outcome.report.aborted) {
    write_file(dir / "FAILED", outcome.report.abort_reason + "\n");
  }
}

RunOutcome optimize(const RunConfig &cfg, const std::filesystem::path &out_base) {
  cfg.check();
  auto dir = make_run_directory(out_base, to_string(cfg.optimizer));
  RunOutcome outcome = execute(cfg);
  outcome.directory = dir;
  write_artifacts(dir, cfg, outcome);
  return outcome;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

CompareReport compare(const RunConfig &base,
                      const std::vector<OptimizerKind> &optimizers,
                      const std::vector<std::uint64_t> &seeds,
                      std::size_t budget, int jobs,
                      const std::filesystem::path &out_base) {
  if (optimizers.empty()) throw ValidationError("compare: no optimizers");
  if (seeds.empty()) throw ValidationError("compare: no seeds");
  if (budget < 1) throw ValidationError("compare: budget must be >= 1");
  CompareReport report;
  report.budget = budget;
  report.optimum = resolve_optimum(base);

  for (auto opt : optimizers) {
    for (auto seed : seeds) report.cells.push_back({opt, seed, {}, {}});
  }
  const int threads = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(report.cells.size()); ++i) {
    auto &cell = report.cells[static_cast<std::size_t>(i)];
    try {
      RunConfig cfg = base;
      cfg.optimizer = cell.optimizer;
      cfg.seed = cell.seed;
      cfg.max_evals = budget;
      cell.report = execute(cfg, report.optimum).report;
    } catch (const std::exception &e) {
      cell.error = e.what();
    }
  }

  // without a known optimum, the best score seen anywhere stands in for it
  if (!report.optimum) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto &c : report.cells) {
      if (c.report.best) best = std::max(best, c.report.best->score);
    }
    if (std::isfinite(best)) {
      report.optimum = best;
      for (auto &c : report.cells) {
        if (c.report.best_so_far.empty()) continue;
        const auto &trace = c.report.best_so_far;
        for (std::size_t k = 0; k < trace.size(); ++k) {
          if (trace[k] >= best - base.optimum_tolerance) {
            c.report.iterations_to_optimum = k + 1;
            break;
          }
        }
        c.report.optimum = best;
      }
    }
  }

  for (auto opt : optimizers) {
    CompareRow row;
    row.optimizer = opt;
    std::vector<double> iters, bests;
    for (const auto &c : report.cells) {
      if (c.optimizer != opt) continue;
      ++row.cells;
      if (!c.error.empty()) continue;
      if (c.report.iterations_to_optimum) ++row.reached;
      iters.push_back(static_cast<double>(
          c.report.iterations_to_optimum.value_or(budget + 1)));
      if (c.report.best) bests.push_back(c.report.best->score);
    }
    row.median_iterations = quantile(iters, 0.5);
    row.q1_iterations = quantile(iters, 0.25);
    row.q3_iterations = quantile(iters, 0.75);
    row.median_best = quantile(bests, 0.5);
    row.q1_best = quantile(bests, 0.25);
    row.q3_best = quantile(bests, 0.75);
    report.rows.push_back(row);
  }

  if (!out_base.empty()) {
    const auto dir = make_run_directory(out_base, "compare");
    report.directory = dir;
    std::filesystem::create_directories(dir / "traces");
    std::ostringstream cells;
    cells << "optimizer,seed,best_score,iterations_to_optimum,evaluations,failures,aborted,error\n";
    for (const auto &c : report.cells) {
      cells << to_string(c.optimizer) << ',' << c.seed << ','
            << (c.report.best ? ojson(c.report.best->score).dump() : "") << ','
            << (c.report.iterations_to_optimum
                    ? std::to_string(*c.report.iterations_to_optimum)
                    : "")
            << ',' << c.report.evaluations << ',' << c.report.failures << ','
            << (c.report.aborted ? "true" : "false") << ',' << '"'
            << c.error << '"' << '\n';
      std::ostringstream trace;
      trace << "evaluation,best_so_far\n";
      for (std::size_t k = 0; k < c.report.best_so_far.size(); ++k) {
        trace << k + 1 << ',' << ojson(c.report.best_so_far[k]).dump() << '\n';
      }
      write_file(dir / "traces" /
                     (to_string(c.optimizer) + "_seed" + std::to_string(c.seed) + ".csv"),
                 trace.str());
    }
    write_file(dir / "cells.csv", cells.str());

    std::ostringstream summary;
    summary << "optimizer,cells,reached,median_iterations,q1_iterations,"
               "q3_iterations,median_best,q1_best,q3_best\n";
    ojson rows = ojson::array();
    for (const auto &r : report.rows) {
      summary << to_string(r.optimizer) << ',' << r.cells << ',' << r.reached << ','
              << ojson(r.median_iterations).dump() << ','
              << ojson(r.q1_iterations).dump() << ',' << ojson(r.q3_iterations).dump()
              << ',' << ojson(r.median_best).dump() << ',' << ojson(r.q1_best).dump()
              << ',' << ojson(r.q3_best).dump() << '\n';
      rows.push_back({{"optimizer", to_string(r.optimizer)},
                      {"cells", r.cells},
                      {"reached", r.reached},
                      {"median_iterations", r.median_iterations},
                      {"q1_iterations", r.q1_iterations},
                      {"q3_iterations", r.q3_iterations},
                      {"median_best", r.median_best},
                      {"q1_best", r.q1_best},
                      {"q3_best", r.q3_best}});
    }
    write_file(dir / "summary.csv", summary.str());
    ojson j;
    j["budget"] = budget;
    j["seeds"] = seeds;
    j["optimum"] = report.optimum ? ojson(*report.optimum) : ojson(nullptr);
    j["rows"] = rows;
    write_file(dir / "summary.json", j.dump(2) + "\n");
    write_file(dir / "config.resolved", resolved_json(base).dump(2) + "\n");
  }
  return report;
}

ReplayResult replay(const std::filesystem::path &run_dir) {
  ReplayResult res;
  auto fail = [&](std::optional<std::uint64_t> it, std::string msg) {
    res.ok = false;
    res.divergent_iteration = it;
    res.message = std::move(msg);
    return res;
  };

  RunConfig cfg;
  History history;
  try {
    cfg = config_from_resolved(nlohmann::json::parse(read_file(run_dir / "config.resolved")));
    std::istringstream records(read_file(run_dir / "history.jsonl"));
    std::istringstream failures(std::filesystem::exists(run_dir / "failures.jsonl")
                                    ? read_file(run_dir / "failures.jsonl")
                                    : std::string());
    history = read_history_jsonl(records, cfg.space, &failures, true);
  } catch (const std::exception &e) {
    return fail(std::nullopt, e.what());
  }

  // BO repeats surface below as a divergence at the repeating iteration
  const bool duplicates_ok = cfg.optimizer == OptimizerKind::bo ||
                             (cfg.optimizer == OptimizerKind::pso && !cfg.pso.memoize);
  std::set<ParamPoint> seen;
  for (const auto &r : history.records()) {
    if (!validate(cfg.space, r.point)) {
      return fail(r.iteration, "iteration " + std::to_string(r.iteration) + ": point " +
                                   to_string(r.point) + " is off the lattice");
    }
    if (!seen.insert(r.point).second && !duplicates_ok) {
      return fail(r.iteration, "iteration " + std::to_string(r.iteration) +
                                   ": point " + to_string(r.point) + " repeated");
    }
  }

  if (std::filesystem::exists(run_dir / "trace.csv")) {
    std::istringstream trace(read_file(run_dir / "trace.csv"));
    std::string line;
    std::getline(trace, line);  // header
    const auto expect = history.best_so_far();
    std::size_t row = 0;
    double previous = -std::numeric_limits<double>::infinity();
    while (std::getline(trace, line)) {
      if (line.empty()) continue;
      std::istringstream fields(line);
      std::string it_s, score_s, best_s;
      std::getline(fields, it_s, ',');
      std::getline(fields, score_s, ',');
      std::getline(fields, best_s, ',');
      if (row >= history.size()) return fail(std::nullopt, "trace.csv has extra rows");
      const auto &rec = history.records()[row];
      double best = 0.0;
      try {
        best = std::stod(best_s);
        if (std::stoull(it_s) != rec.iteration || std::stod(score_s) != rec.score ||
            best != expect[row] || best < previous) {
          return fail(rec.iteration, "iteration " + std::to_string(rec.iteration) +
                                         ": trace.csv disagrees with history.jsonl");
        }
      } catch (const std::logic_error &) {
        return fail(rec.iteration, "trace.csv row " + std::to_string(row + 1) + " is malformed");
      }
      previous = best;
      ++row;
    }
    if (row != history.size()) return fail(std::nullopt, "trace.csv is missing rows");
  }

  if (cfg.optimizer != OptimizerKind::bo) {
    res.message = "validity and best-so-far checks passed (" +
                  std::to_string(history.size()) + " records)";
    return res;
  }

  struct Entry {
    std::uint64_t iteration;
    const EvalRecord *record;
    const FailureRecord *failure;
  };
  std::vector<Entry> entries;
  for (const auto &r : history.records()) entries.push_back({r.iteration, &r, nullptr});
  for (const auto &f : history.failures()) entries.push_back({f.iteration, nullptr, &f});
  std::sort(entries.begin(), entries.end(),
            [](const Entry &a, const Entry &b) { return a.iteration < b.iteration; });

  const auto bo = cfg.effective_bo();
  const Lattice lattice(cfg.space);
  BoProposer proposer(lattice, bo);
  History prefix(true);
  for (const auto &e : entries) {
    const ParamPoint &recorded = e.record ? e.record->point : e.failure->point;
    ParamPoint proposed;
    try {
      proposed = proposer.propose(prefix);
    } catch (const std::exception &ex) {
      return fail(e.iteration, "iteration " + std::to_string(e.iteration) +
                                   ": no proposal (" + ex.what() + ")");
    }
    if (proposed != recorded) {
      return fail(e.iteration, "iteration " + std::to_string(e.iteration) +
                                   ": recorded " + to_string(recorded) +
                                   " but acquisition selects " + to_string(proposed));
    }
    if (e.record) {
      prefix.add(*e.record);
    } else {
      prefix.add_failure(*e.failure);
    }
  }
  res.message = "all " + std::to_string(entries.size()) + " BO decisions reproduced";
  return res;
}

}  // namespace hypertune
