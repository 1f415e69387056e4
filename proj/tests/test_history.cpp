#include <doctest.h>

#include <cmath>

#include <sstream>

#include "hypertune/error.hpp"
#include "hypertune/history.hpp"

using namespace hypertune;

namespace {

EvalRecord rec(std::uint64_t it, std::int64_t m, double score) {
  return {it, ParamPoint{{m, 64, 2}}, score, 0.25, "gan_proxy"};
}

}  // namespace

TEST_SUITE("history") {
  TEST_CASE("iterations must increase across records and failures") {
    History h;
    h.add(rec(1, 2, 0.0));
    h.add_failure({2, ParamPoint{{3, 64, 2}}, "timeout", "slow"});
    h.add(rec(3, 4, 1.0));
    CHECK(h.next_iteration() == 4);
    CHECK_THROWS_AS(h.add(rec(3, 5, 1.0)), ValidationError);
    CHECK_THROWS_AS(h.add_failure({2, ParamPoint{{6, 64, 2}}, "x", ""}), ValidationError);
    CHECK(h.size() == 2);
    CHECK(h.failures().size() == 1);
  }

  TEST_CASE("duplicates and non-finite scores are rejected") {
    History h;
    h.add(rec(1, 2, 0.0));
    CHECK_THROWS_AS(h.add(rec(2, 2, 1.0)), ValidationError);
    CHECK_THROWS_AS(h.add(rec(2, 3, NAN)), ValidationError);
    History loose(true);
    loose.add(rec(1, 2, 0.0));
    CHECK_NOTHROW(loose.add(rec(2, 2, 1.0)));
  }

  TEST_CASE("best prefers the earliest of equal scores") {
    History h;
    CHECK_FALSE(h.best().has_value());
    h.add(rec(1, 2, 1.0));
    h.add(rec(2, 3, 5.0));
    h.add(rec(3, 4, 5.0));
    h.add(rec(4, 5, -1.0));
    REQUIRE(h.best());
    CHECK(h.best()->iteration == 2);
    CHECK(h.best_so_far() == std::vector<double>{1.0, 5.0, 5.0, 5.0});
    CHECK(h.total_wall_time() == 1.0);
    CHECK(evaluations_to_reach(h, 5.0, 0.0) == 2);
    CHECK(evaluations_to_reach(h, 5.5, 0.6) == 2);
    CHECK_FALSE(evaluations_to_reach(h, 6.0, 0.5).has_value());
  }

  TEST_CASE("jsonl round trip and exact line format") {
    const auto space = SearchSpace::gan_default();
    History h;
    h.add({1, ParamPoint{{3, 140, 3}}, 0.1, 0.5, "gan_proxy"});
    h.add_failure({2, ParamPoint{{4, 64, 2}}, "timeout", "no response"});
    h.add({3, ParamPoint{{2, 64, 2}}, -97.25, 0.5, "gan_proxy"});

    std::ostringstream rec_out, fail_out;
    write_history_jsonl(rec_out, space, h);
    write_failures_jsonl(fail_out, space, h);
    CHECK(rec_out.str() ==
          "{\"iteration\":1,\"params\":{\"m\":3,\"n\":140,\"k\":3},\"score\":0.1,"
          "\"objective_id\":\"gan_proxy\"}\n"
          "{\"iteration\":3,\"params\":{\"m\":2,\"n\":64,\"k\":2},\"score\":-97.25,"
          "\"objective_id\":\"gan_proxy\"}\n");
    CHECK(fail_out.str() ==
          "{\"iteration\":2,\"params\":{\"m\":4,\"n\":64,\"k\":2},\"error\":\"timeout\","
          "\"message\":\"no response\"}\n");

    std::istringstream rin(rec_out.str()), fin(fail_out.str());
    const auto back = read_history_jsonl(rin, space, &fin);
    REQUIRE(back.size() == 2);
    REQUIRE(back.failures().size() == 1);
    CHECK(back.records()[0].point == h.records()[0].point);
    CHECK(back.records()[1].score == -97.25);
    CHECK(back.failures()[0].kind == "timeout");
    CHECK(back.next_iteration() == 4);
  }

  TEST_CASE("trace and timings csv") {
    History h;
    h.add(rec(1, 2, 0.1));
    h.add(rec(2, 3, -1.0));
    h.add(rec(4, 4, 2.5));
    std::ostringstream trace, timings;
    write_trace_csv(trace, h);
    write_timings_csv(timings, h);
    CHECK(trace.str() ==
          "iteration,score,best_so_far\n1,0.1,0.1\n2,-1.0,0.1\n4,2.5,2.5\n");
    CHECK(timings.str() == "iteration,wall_time\n1,0.25\n2,0.25\n4,0.25\n");
  }

  TEST_CASE("reading rejects broken lines") {
    const auto space = SearchSpace::gan_default();
    auto read = [&](const std::string &text) {
      std::istringstream in(text);
      return read_history_jsonl(in, space);
    };
    CHECK_THROWS_AS(read("not json\n"), ValidationError);
    CHECK_THROWS_AS(read("{\"params\":{\"m\":3,\"n\":64,\"k\":2},\"score\":1}\n"),
                    ValidationError);
    CHECK_THROWS_AS(read("{\"iteration\":1,\"params\":{\"m\":3,\"k\":2},\"score\":1}\n"),
                    ValidationError);
    CHECK_THROWS_AS(read("{\"iteration\":1,\"params\":{\"m\":3,\"n\":64,\"k\":2}}\n"),
                    ValidationError);
    CHECK_THROWS_AS(
        read("{\"iteration\":1,\"params\":{\"m\":3,\"n\":64,\"k\":2},\"score\":1}\n"
             "{\"iteration\":2,\"params\":{\"m\":3,\"n\":64,\"k\":2},\"score\":2}\n"),
        ValidationError);
    CHECK(read("").empty());
  }
}
