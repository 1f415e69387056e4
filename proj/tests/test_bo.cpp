#include <doctest.h>

#include <set>

#include "hypertune/bo.hpp"
#include "hypertune/error.hpp"

using namespace hypertune;

namespace {

class Constant final : public Objective {
 public:
  double evaluate(const ParamPoint &) override { return 1.5; }
  std::string id() const override { return "constant"; }
};

double lattice_max(const SearchSpace &space) {
  double best = -INFINITY;
  for (const auto &p : enumerate(space)) best = std::max(best, gan_proxy(p));
  return best;
}

void check_history_invariants(const SearchSpace &space, const History &h) {
  std::set<ParamPoint> seen;
  std::uint64_t last = 0;
  double running = -INFINITY;
  const auto trace = h.best_so_far();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto &r = h.records()[i];
    REQUIRE(validate(space, r.point));
    REQUIRE(seen.insert(r.point).second);
    REQUIRE(r.iteration > last);
    last = r.iteration;
    running = std::max(running, r.score);
    REQUIRE(trace[i] == running);
  }
}

}  // namespace

TEST_SUITE("bo") {
  TEST_CASE("config validation") {
    BoConfig cfg;
    CHECK_NOTHROW(cfg.check(4410));
    cfg.n_initial = 1;
    CHECK_THROWS_AS(cfg.check(4410), ValidationError);
    CHECK_NOTHROW(cfg.check(1));
    cfg = {};
    cfg.n_initial = 60;
    CHECK_THROWS_AS(cfg.check(4410), ValidationError);
    cfg = {};
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(cfg.check(4410), ValidationError);
    cfg = {};
    cfg.acquisition.lambda = INFINITY;
    CHECK_THROWS_AS(cfg.check(4410), ValidationError);
    cfg = {};
    cfg.refit_period = 0;
    CHECK_THROWS_AS(cfg.check(4410), ValidationError);
  }

  TEST_CASE("one-point lattice") {
    const SearchSpace s({{"m", 4, 4, 1}});
    Constant obj;
    const auto r = run_bo(s, obj, {});
    REQUIRE(r.history.size() == 1);
    REQUIRE(r.best);
    CHECK(r.best->point == ParamPoint{{4}});
  }

  TEST_CASE("budget is capped by the lattice size") {
    const SearchSpace s({{"a", 0, 2, 1}, {"b", 0, 1, 1}});
    Constant obj;
    BoConfig cfg;
    cfg.max_iterations = 50;
    const auto r = run_bo(s, obj, cfg);
    CHECK(r.history.size() == 6);
    check_history_invariants(s, r.history);
  }

  TEST_CASE("constant objective keeps the first point as best") {
    const auto space = SearchSpace::gan_default();
    Constant obj;
    BoConfig cfg;
    cfg.max_iterations = 15;
    const auto r = run_bo(space, obj, cfg);
    REQUIRE(r.history.size() == 15);
    CHECK(r.best->iteration == 1);
    check_history_invariants(space, r.history);
  }

  TEST_CASE("seed 42 finds the gan_proxy maximum within 30 iterations") {
    const auto space = SearchSpace::gan_default();
    BuiltinObjective obj(space, "gan_proxy", false);
    BoConfig cfg;
    cfg.max_iterations = 30;
    const auto r = run_bo(space, obj, cfg);
    REQUIRE(r.history.size() == 30);
    CHECK(r.best->score == lattice_max(space));
    CHECK(r.best->point == ParamPoint{{3, 140, 3}});
    check_history_invariants(space, r.history);
  }

  TEST_CASE("pi acquisition also runs to budget with valid points") {
    const auto space = SearchSpace::gan_default();
    BuiltinObjective obj(space, "gan_proxy", false);
    BoConfig cfg;
    cfg.max_iterations = 20;
    cfg.seed = 3;
    cfg.acquisition.kind = AcquisitionKind::pi;
    const auto r = run_bo(space, obj, cfg);
    CHECK(r.history.size() == 20);
    check_history_invariants(space, r.history);
  }

  TEST_CASE("runs are reproducible and seeds matter") {
    const auto space = SearchSpace::gan_default();
    BuiltinObjective obj(space, "gan_proxy", false);
    BoConfig cfg;
    cfg.max_iterations = 12;
    const auto a = run_bo(space, obj, cfg);
    const auto b = run_bo(space, obj, cfg);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
      CHECK(a.history.records()[i].point == b.history.records()[i].point);
      CHECK(a.history.records()[i].score == b.history.records()[i].score);
    }
    cfg.seed = 43;
    const auto c = run_bo(space, obj, cfg);
    CHECK(c.history.records()[0].point != a.history.records()[0].point);
  }

  TEST_CASE("proposer reproduces every decision from recorded prefixes") {
    const auto space = SearchSpace::gan_default();
    BuiltinObjective obj(space, "gan_proxy", false);
    BoConfig cfg;
    cfg.max_iterations = 25;
    cfg.seed = 9;
    const auto r = run_bo(space, obj, cfg);
    const Lattice lat(space);
    BoProposer proposer(lat, cfg);
    History prefix;
    for (const auto &rec : r.history.records()) {
      REQUIRE(proposer.propose(prefix) == rec.point);
      prefix.add(rec);
    }
  }

  TEST_CASE("initial design is the seeded permutation prefix") {
    const SearchSpace s({{"a", 0, 9, 1}});
    Constant obj;
    BoConfig cfg;
    cfg.max_iterations = 3;
    const auto r = run_bo(s, obj, cfg);
    REQUIRE(r.history.size() == 3);
    std::set<ParamPoint> distinct;
    for (const auto &rec : r.history.records()) distinct.insert(rec.point);
    CHECK(distinct.size() == 3);
  }
}
