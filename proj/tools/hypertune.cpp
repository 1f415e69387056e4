// hypertune: command-line front end for the optimizers, comparisons,
// replay audits and image metrics.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "hypertune/config.hpp"
#include "hypertune/error.hpp"
#include "hypertune/image_metrics.hpp"
#include "hypertune/runner.hpp"

namespace ht = hypertune;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAborted = 3;

std::vector<std::uint64_t> parse_seeds(const std::string &text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(std::stoull(part));
      continue;
    }
    const auto lo = std::stoull(part.substr(0, dots));
    const auto hi = std::stoull(part.substr(dots + 2));
    if (hi < lo) throw ht::ValidationError("empty seed range '" + part + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ht::ValidationError("no seeds given");
  return seeds;
}

std::vector<ht::OptimizerKind> parse_optimizers(const std::string &text) {
  std::vector<ht::OptimizerKind> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(ht::parse_optimizer_kind(part));
  }
  return out;
}

std::string format_params(const ht::SearchSpace &space, const ht::ParamPoint &p) {
  std::string s = "{";
  for (std::size_t i = 0; i < space.dims(); ++i) {
    if (i) s += ", ";
    s += space[i].name + "=" + std::to_string(p[i]);
  }
  return s + "}";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Derivative-free hyperparameter search over integer lattices"};
  app.require_subcommand(1);

  auto *opt_cmd = app.add_subcommand("optimize", "run one optimizer");
  std::string config_path;
  std::string optimizer;
  std::uint64_t seed = 0;
  std::size_t max_evals = 0;
  std::string out_dir;
  std::string acquisition;
  double lambda = 1.0;
  opt_cmd->add_option("--config", config_path, "YAML run config")->required();
  opt_cmd->add_option("--optimizer", optimizer, "bo | cobyla | pso | random");
  opt_cmd->add_option("--seed", seed, "random seed");
  opt_cmd->add_option("--max-evals", max_evals, "evaluation budget");
  opt_cmd->add_option("--out", out_dir, "parent directory for the run");
  opt_cmd->add_option("--acquisition", acquisition, "ucb | pi");
  opt_cmd->add_option("--lambda", lambda, "UCB exploration weight");

  auto *cmp_cmd = app.add_subcommand("compare", "compare optimizers over seeds");
  std::string cmp_config;
  std::string cmp_optimizers = "bo,cobyla,pso";
  std::string cmp_seeds = "1..20";
  std::size_t budget = 50;
  int jobs = 1;
  std::string cmp_out;
  cmp_cmd->add_option("--config", cmp_config, "YAML run config")->required();
  cmp_cmd->add_option("--optimizers", cmp_optimizers, "comma-separated list");
  cmp_cmd->add_option("--seeds", cmp_seeds, "e.g. 1..20 or 1,5,9");
  cmp_cmd->add_option("--budget", budget, "evaluations per cell");
  cmp_cmd->add_option("--jobs", jobs, "cells run at once (HYPERTUNE_JOBS overrides)");
  cmp_cmd->add_option("--out", cmp_out, "parent directory for the comparison");

  auto *metrics_cmd = app.add_subcommand("eval-metrics", "MSE / PSNR / SSIM of two PNGs");
  std::string image_a, image_b;
  std::string window = "gaussian_11x11";
  metrics_cmd->add_option("A", image_a, "reference image")->required();
  metrics_cmd->add_option("B", image_b, "test image")->required();
  metrics_cmd->add_option("--ssim-window", window, "gaussian_11x11 | global");

  auto *replay_cmd = app.add_subcommand("replay", "re-verify a run directory");
  std::string run_dir;
  replay_cmd->add_option("DIR", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*opt_cmd) {
      auto cfg = ht::load_config(config_path);
      try {
        if (!optimizer.empty()) cfg.optimizer = ht::parse_optimizer_kind(optimizer);
        if (opt_cmd->count("--seed")) cfg.seed = seed;
        if (opt_cmd->count("--max-evals")) cfg.max_evals = max_evals;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!acquisition.empty()) {
          cfg.bo.acquisition.kind = ht::parse_acquisition_kind(acquisition);
        }
        if (opt_cmd->count("--lambda")) cfg.bo.acquisition.lambda = lambda;
      } catch (const ht::ValidationError &e) {
        throw ht::ConfigError(e.what());
      }
      cfg.check();
      const auto outcome = ht::optimize(cfg, cfg.output_dir);
      std::cout << "run directory: " << outcome.directory.string() << '\n';
      if (outcome.report.best) {
        std::cout << "best: " << format_params(cfg.space, outcome.report.best->point)
                  << " score " << std::setprecision(10) << outcome.report.best->score
                  << " (iteration " << outcome.report.best->iteration << ")\n";
      }
      if (outcome.report.iterations_to_optimum) {
        std::cout << "reached optimum after " << *outcome.report.iterations_to_optimum
                  << " evaluations\n";
      }
      if (outcome.report.aborted) {
        std::cerr << "run aborted: " << outcome.report.abort_reason << '\n';
        return kExitAborted;
      }
      return 0;
    }

    if (*cmp_cmd) {
      auto cfg = ht::load_config(cmp_config);
      if (const char *env = std::getenv("HYPERTUNE_JOBS"); env && *env) {
        jobs = std::stoi(env);
      }
      const auto seeds = parse_seeds(cmp_seeds);
      if (seeds.size() < 2) throw ht::ValidationError("compare needs at least 2 seeds");
      const auto report = ht::compare(cfg, parse_optimizers(cmp_optimizers), seeds,
                                      budget, jobs,
                                      cmp_out.empty() ? cfg.output_dir : cmp_out);
      std::cout << "comparison directory: " << report.directory.string() << '\n';
      std::cout << "optimum: "
                << (report.optimum ? std::to_string(*report.optimum) : "unknown")
                << ", budget " << report.budget << '\n';
      std::cout << std::left << std::setw(10) << "optimizer" << std::setw(8) << "cells"
                << std::setw(9) << "reached" << std::setw(26)
                << "iters median [q1, q3]" << "best median [q1, q3]\n";
      for (const auto &r : report.rows) {
        std::ostringstream iters, best;
        iters << std::setprecision(4) << r.median_iterations << " [" << r.q1_iterations
              << ", " << r.q3_iterations << "]";
        best << std::setprecision(6) << r.median_best << " [" << r.q1_best << ", "
             << r.q3_best << "]";
        std::cout << std::left << std::setw(10) << ht::to_string(r.optimizer)
                  << std::setw(8) << r.cells << std::setw(9) << r.reached
                  << std::setw(26) << iters.str() << best.str() << '\n';
      }
      for (const auto &c : report.cells) {
        if (!c.error.empty()) {
          std::cerr << ht::to_string(c.optimizer) << " seed " << c.seed
                    << " failed: " << c.error << '\n';
        }
      }
      return 0;
    }

    if (*metrics_cmd) {
      const auto a = ht::load_png(image_a);
      const auto b = ht::load_png(image_b);
      ht::SsimConfig ssim_cfg;
      ssim_cfg.window = ht::parse_ssim_window(window);
      nlohmann::ordered_json j;
      j["mse"] = ht::mse(a, b);
      j["psnr"] = ht::psnr(a, b);
      j["ssim"] = ht::ssim(a, b, ssim_cfg);
      j["ssim_window"] = ht::to_string(ssim_cfg.window);
      std::cout << j.dump() << '\n';
      return 0;
    }

    if (*replay_cmd) {
      const auto res = ht::replay(run_dir);
      if (res.ok) {
        std::cout << "replay ok: " << res.message << '\n';
        return 0;
      }
      std::cerr << "replay diverged: " << res.message << '\n';
      return kExitFailure;
    }
  } catch (const ht::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ht::ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
