#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hypertune/config.hpp"
#include "hypertune/error.hpp"

using namespace hypertune;

namespace {

const char *kMinimal = R"(space:
  - {name: m, lower: 2, upper: 11}
  - {name: n, lower: 64, upper: 256, multiple_of: 4}
  - {name: k, lower: 2, upper: 10}
objective:
  kind: builtin
  builtin_id: gan_proxy
optimizer: pso
pso: {}
)";

std::string message_of(const std::string &yaml) {
  try {
    parse_config(yaml, "test.yaml");
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string text, const std::string &from, const std::string &to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("shipped config parses to the defaults") {
    const auto cfg = load_config(std::string(HT_CONFIGS) + "/gan_proxy.yaml");
    CHECK(cfg.space == SearchSpace::gan_default());
    CHECK(cfg.objective.builtin_id == "gan_proxy");
    CHECK(cfg.optimizer == OptimizerKind::bo);
    CHECK(cfg.seed == 42);
    CHECK(cfg.max_evals == 50);
    CHECK(cfg.bo.acquisition.lambda == 1.0);
    CHECK(cfg.bo.kernel.length_scale == std::vector<double>{0.2});
    CHECK(cfg.cobyla.rho_end == 0.001);
    CHECK(cfg.pso.n_particles == 8);
  }

  TEST_CASE("shipped external example parses") {
    const auto cfg = load_config(std::string(HT_CONFIGS) + "/external_example.yaml");
    CHECK(cfg.objective.kind == ObjectiveKind::external);
    CHECK(cfg.objective.command == "python3 tools/example_objective.py");
    CHECK(cfg.space == SearchSpace::gan_default());
  }

  TEST_CASE("minimal config and effective optimizer settings") {
    const auto cfg = parse_config(kMinimal);
    CHECK(cfg.optimizer == OptimizerKind::pso);
    CHECK(cfg.space.lattice_size() == 4410.0);
    const auto pso = cfg.effective_pso();
    CHECK(pso.max_evals == cfg.max_evals);
    CHECK(pso.seed == cfg.seed);
    auto small = cfg;
    small.max_evals = 2;
    CHECK(small.effective_bo().n_initial == 2);
    CHECK(small.effective_bo().max_iterations == 2);
  }

  TEST_CASE("missing bounds name the field and line") {
    const auto msg = message_of(replace(kMinimal, "lower: 64, ", ""));
    CHECK(msg.find("space[1].lower") != std::string::npos);
    CHECK(msg.rfind("test.yaml:3:", 0) == 0);
  }

  TEST_CASE("line-anchored errors") {
    CHECK(message_of(replace(kMinimal, "builtin_id: gan_proxy", "builtin_id: nope"))
              .find("test.yaml:7:") == 0);
    CHECK(message_of(std::string(kMinimal) + "colour: red\n").find("unknown key 'colour'") !=
          std::string::npos);
    CHECK(message_of(replace(kMinimal, "pso: {}", "pso: {speed: 2}"))
              .find("unknown key 'speed'") != std::string::npos);
    CHECK(message_of(replace(kMinimal, "upper: 11", "upper: eleven"))
              .find("space[0].upper") != std::string::npos);
    CHECK(message_of("space: [\n").find("test.yaml:") == 0);
    CHECK(message_of("- 1\n- 2\n").find("must be a mapping") != std::string::npos);
    CHECK(message_of(replace(kMinimal, "optimizer: pso", "optimizer: cobyla"))
              .find("missing required field 'cobyla'") != std::string::npos);
    CHECK(message_of(replace(kMinimal, "optimizer: pso", "optimizer: annealing"))
              .find("test.yaml:8:") == 0);
    CHECK(message_of(replace(kMinimal, "upper: 11", "upper: 1")).find("test.yaml:") == 0);
    CHECK(message_of(replace(kMinimal, "pso: {}", "pso: {inertia: 1.5}"))
              .find("inertia") != std::string::npos);
  }

  TEST_CASE("errors carry line and column") {
    try {
      parse_config(replace(kMinimal, "lower: 64, ", ""), "x");
      FAIL("expected ConfigError");
    } catch (const ConfigError &e) {
      CHECK(e.line() == 3);
      CHECK(e.column() > 0);
    }
  }

  TEST_CASE("external objective section") {
    const auto cfg = parse_config(replace(kMinimal, "kind: builtin\n  builtin_id: gan_proxy",
                                          "kind: external\n  command: ./trainer --fast\n"
                                          "  timeout: 30\n  children: 2"));
    CHECK(cfg.objective.kind == ObjectiveKind::external);
    CHECK(cfg.objective.command == "./trainer --fast");
    CHECK(cfg.objective.timeout == 30.0);
    CHECK(cfg.objective.children == 2);
    CHECK(message_of(replace(kMinimal, "kind: builtin\n  builtin_id: gan_proxy",
                             "kind: external"))
              .find("objective.command") != std::string::npos);
  }

  TEST_CASE("resolved config round trips") {
    auto cfg = parse_config(kMinimal);
    cfg.seed = 99;
    cfg.known_optimum = 0.5;
    cfg.bo.kernel.length_scale = {0.1, 0.2, 0.4};
    const auto j = resolved_json(cfg);
    const auto back = config_from_resolved(nlohmann::json::parse(j.dump()));
    CHECK(resolved_json(back).dump() == j.dump());
    CHECK(back.seed == 99);
    CHECK(back.known_optimum == 0.5);
    CHECK(back.space == cfg.space);
    CHECK(j.begin().key() == "space");
  }

  TEST_CASE("optimizer names") {
    CHECK(parse_optimizer_kind("cobyla") == OptimizerKind::cobyla);
    CHECK(to_string(OptimizerKind::random) == "random");
    CHECK_THROWS(parse_optimizer_kind("BO"));
  }
}
