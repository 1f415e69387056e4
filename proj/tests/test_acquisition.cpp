#include <doctest.h>

#include <cmath>

#include "hypertune/acquisition.hpp"
#include "hypertune/error.hpp"
#include "hypertune/rng.hpp"
#include "oracles.hpp"

using namespace hypertune;

namespace {

GpModel fit_on(const SearchSpace &space, const std::vector<ParamPoint> &pts,
               const std::vector<double> &ys, KernelConfig cfg = {}) {
  std::vector<std::vector<double>> xs;
  for (const auto &p : pts) xs.push_back(normalize(space, p));
  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= double(ys.size());
  return GpModel::fit(cfg, mean, xs, ys);
}

}  // namespace

TEST_SUITE("acquisition") {
  TEST_CASE("ucb examples") {
    CHECK(ucb({2.0, 0.25}, 1.0) == 2.5);
    CHECK(ucb({2.0, 0.25}, 0.0) == 2.0);
    CHECK(ucb({-1.5, 0.0}, 7.0) == -1.5);
    CHECK(ucb({0.0, 4.0}, 0.5) == 1.0);
  }

  TEST_CASE("probability of improvement examples") {
    CHECK(std::abs(probability_of_improvement({1.0, 0.09}, 1.0) - 0.5) <= 1e-12);
    CHECK(probability_of_improvement({1.3, 0.09}, 1.0) ==
          doctest::Approx(oracle::normal_cdf(1.0)).epsilon(1e-10));
    CHECK(probability_of_improvement({1.3, 0.09}, 1.0) ==
          doctest::Approx(0.8413).epsilon(1e-4));
    CHECK(probability_of_improvement({0.5, 0.0}, 1.0) == 0.0);
    CHECK(probability_of_improvement({1.0, 0.0}, 1.0) == 1.0);
    CHECK(probability_of_improvement({1.5, 0.0}, 1.0) == 1.0);
  }

  TEST_CASE("normal cdf matches numeric integration") {
    for (double z : {-8.0, -3.0, -1.0, -0.25, 0.0, 0.4, 1.0, 2.5, 6.0}) {
      CHECK(standard_normal_cdf(z) == doctest::Approx(oracle::normal_cdf(z)).epsilon(1e-9));
    }
    CHECK(standard_normal_cdf(-30.0) > 0.0);
  }

  TEST_CASE("acquisition_value dispatches on kind") {
    AcquisitionConfig cfg;
    cfg.lambda = 2.0;
    CHECK(acquisition_value({1.0, 1.0}, cfg) == 3.0);
    cfg.kind = AcquisitionKind::pi;
    cfg.incumbent = 1.0;
    CHECK(acquisition_value({1.0, 1.0}, cfg) == 0.5);
    CHECK(parse_acquisition_kind("ucb") == AcquisitionKind::ucb);
    CHECK(parse_acquisition_kind("pi") == AcquisitionKind::pi);
    CHECK(to_string(AcquisitionKind::pi) == "pi");
    CHECK_THROWS(parse_acquisition_kind("ei"));
  }

  TEST_CASE("ucb monotone in lambda, pi monotone in mean and sigma") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
      const Posterior p{rng.uniform(-5, 5), rng.uniform(1e-6, 4.0)};
      const double l1 = rng.uniform(0, 3), l2 = l1 + rng.uniform(1e-3, 3);
      REQUIRE(ucb(p, l2) > ucb(p, l1));
      REQUIRE(ucb(p, 0.0) == p.mean);

      const double inc = rng.uniform(-5, 5);
      const Posterior higher{p.mean + rng.uniform(1e-3, 1.0), p.variance};
      REQUIRE(probability_of_improvement(higher, inc) >=
              probability_of_improvement(p, inc));
      if (p.mean < inc) {
        const Posterior wider{p.mean, p.variance * 1.5};
        REQUIRE(probability_of_improvement(wider, inc) >=
                probability_of_improvement(p, inc));
      }
      const double pi = probability_of_improvement(p, inc);
      REQUIRE(pi >= 0.0);
      REQUIRE(pi <= 1.0);
    }
  }

  TEST_CASE("one-point space") {
    const SearchSpace s({{"v", 3, 3, 1}});
    const auto m = fit_on(s, {ParamPoint{{3}}}, {1.0});
    CHECK(select_next(m, s, {}, {}) == ParamPoint{{3}});
    CHECK_THROWS_AS(select_next(m, s, {}, {ParamPoint{{3}}}), ExhaustedSpace);
  }

  TEST_CASE("three-point space with PI, hand-computed") {
    // v in {0,1,2}; observed v=0 -> 0 and v=2 -> 1; v=1 held out.
    const SearchSpace s({{"v", 0, 2, 1}});
    KernelConfig kc;
    kc.length_scale = {1.0};
    kc.noise_variance = 0.0;
    const auto m = fit_on(s, {ParamPoint{{0}}, ParamPoint{{2}}}, {0.0, 1.0}, kc);
    AcquisitionConfig cfg;
    cfg.kind = AcquisitionKind::pi;
    cfg.incumbent = 1.0;

    const double d = 1.0 + m.effective_jitter(), b = std::exp(-0.5);
    const double det = d * d - b * b;
    auto hand = [&](double x) {
      const double k0 = std::exp(-0.5 * x * x);
      const double k1 = std::exp(-0.5 * (x - 1) * (x - 1));
      const double w0 = (d * k0 - b * k1) / det, w1 = (-b * k0 + d * k1) / det;
      const double mean = 0.5 + 0.5 * (w0 * -1.0 + w1 * 1.0);
      const double var = 0.25 * std::max(1.0 - (w0 * k0 + w1 * k1), 0.0);
      if (var == 0.0) return mean >= 1.0 ? 1.0 : 0.0;
      return 0.5 * std::erfc(-(mean - 1.0) / std::sqrt(var) / std::sqrt(2.0));
    };
    const Lattice lat(s);
    const auto scores = score_lattice_serial(m, lat, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(scores[i] == doctest::Approx(hand(0.5 * double(i))).epsilon(1e-9));
    }
    CHECK(scores[1] > scores[0]);
    CHECK(select_next(m, s, cfg, {ParamPoint{{0}}, ParamPoint{{2}}}) == ParamPoint{{1}});
  }

  TEST_CASE("argmax_first breaks ties by index") {
    CHECK(argmax_first({1.0, 3.0, 3.0, 2.0}) == 1);
    CHECK(argmax_first({-INFINITY, 0.0}) == 1);
    CHECK_THROWS_AS(argmax_first({-INFINITY, -INFINITY}), ExhaustedSpace);
    CHECK_THROWS_AS(argmax_first({}), ExhaustedSpace);
  }

  TEST_CASE("parallel and serial lattice scoring agree") {
    const auto space = SearchSpace::gan_default();
    const Lattice lat(space);
    Rng rng(3);
    std::vector<ParamPoint> pts;
    std::vector<double> ys;
    for (int i = 0; i < 25; ++i) {
      pts.push_back(lat.point(rng.below(lat.size())));
      ys.push_back(rng.uniform(-3, 3));
    }
    const auto m = fit_on(space, pts, ys);
    std::vector<bool> skip(lat.size(), false);
    for (std::size_t i = 0; i < lat.size(); i += 7) skip[i] = true;
    for (auto kind : {AcquisitionKind::ucb, AcquisitionKind::pi}) {
      AcquisitionConfig cfg;
      cfg.kind = kind;
      cfg.incumbent = 2.0;
      const auto par = score_lattice(m, lat, cfg, skip);
      const auto ser = score_lattice_serial(m, lat, cfg, skip);
      REQUIRE(par.size() == ser.size());
      for (std::size_t i = 0; i < par.size(); ++i) {
        if (skip[i]) {
          REQUIRE(std::isinf(par[i]));
          REQUIRE(std::isinf(ser[i]));
        } else {
          REQUIRE(std::abs(par[i] - ser[i]) <= 1e-12 * (1.0 + std::abs(ser[i])));
          const auto post = m.predict(lat.unit(i));
          REQUIRE(std::abs(ser[i] - acquisition_value(post, cfg)) <=
                  1e-12 * (1.0 + std::abs(ser[i])));
        }
      }
      CHECK(argmax_first(par) == argmax_first(ser));
    }
    CHECK_THROWS_AS(score_lattice(m, lat, {}, std::vector<bool>(3, false)),
                    StructuralError);
  }

  TEST_CASE("exploitation-only choice is the best unvisited posterior mean") {
    const SearchSpace s({{"a", 0, 6, 1}, {"b", 0, 12, 4}});
    const Lattice lat(s);
    std::vector<ParamPoint> seen;
    std::vector<double> ys;
    std::set<ParamPoint> visited;
    for (std::size_t i = 0; i < lat.size(); i += 3) {
      const auto &p = lat.point(i);
      seen.push_back(p);
      ys.push_back(-double((p[0] - 4) * (p[0] - 4)) - 0.1 * double(p[1]));
      visited.insert(p);
    }
    KernelConfig kc;
    kc.noise_variance = 0.0;
    const auto m = fit_on(s, seen, ys, kc);
    AcquisitionConfig cfg;
    cfg.lambda = 0.0;
    const auto chosen = select_next(m, s, cfg, visited);
    CHECK(visited.count(chosen) == 0);
    double best = -INFINITY;
    ParamPoint arg;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      if (visited.count(lat.point(i))) continue;
      const double mu = m.predict(lat.unit(i)).mean;
      if (mu > best) {
        best = mu;
        arg = lat.point(i);
      }
    }
    CHECK(chosen == arg);
  }

  TEST_CASE("argmax is invariant under a constant shift of the targets") {
    const auto space = SearchSpace::gan_default();
    const Lattice lat(space);
    Rng rng(12);
    std::vector<ParamPoint> pts;
    std::vector<double> ys, shifted;
    std::vector<bool> visited(lat.size(), false);
    for (int i = 0; i < 12; ++i) {
      const auto idx = rng.below(lat.size());
      if (visited[idx]) continue;
      visited[idx] = true;
      pts.push_back(lat.point(idx));
      ys.push_back(rng.uniform(-1, 1));
      shifted.push_back(ys.back() + 123.0);
    }
    const auto a = fit_on(space, pts, ys);
    const auto b = fit_on(space, pts, shifted);
    CHECK(select_next_index(a, lat, {}, visited) ==
          select_next_index(b, lat, {}, visited));
    for (std::size_t i = 0; i < lat.size(); i += 50) {
      CHECK(b.predict(lat.unit(i)).mean - a.predict(lat.unit(i)).mean ==
            doctest::Approx(123.0).epsilon(1e-9));
      CHECK(b.predict(lat.unit(i)).variance ==
            doctest::Approx(a.predict(lat.unit(i)).variance).epsilon(1e-9));
    }
  }

  TEST_CASE("select_next never returns a visited point") {
    const SearchSpace s({{"a", 0, 4, 1}, {"b", 0, 4, 2}});
    const Lattice lat(s);
    std::set<ParamPoint> visited{lat.point(0), lat.point(4)};
    std::vector<double> ys{0.0, 1.0};
    std::vector<ParamPoint> seen(visited.begin(), visited.end());
    for (std::size_t step = 0; step + 2 < lat.size(); ++step) {
      const auto m = fit_on(s, seen, ys);
      AcquisitionConfig cfg;
      cfg.lambda = 0.0;
      const auto p = select_next(m, s, cfg, visited);
      REQUIRE(visited.count(p) == 0);
      visited.insert(p);
      seen.push_back(p);
      ys.push_back(1.0);
    }
    const auto m = fit_on(s, seen, ys);
    CHECK_THROWS_AS(select_next(m, s, {}, visited), ExhaustedSpace);
  }
}
