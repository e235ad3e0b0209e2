#include <cmath>
#include <random>

#include <doctest.h>

#include "merodyn/orbits.hpp"

using namespace merodyn;

TEST_CASE("iterate converges to the regime's fixed point") {
  const auto o1 = iterate(Parameter(0.9), 0.05, 1000);
  CHECK(o1.termination.kind == Termination::Kind::Converged);
  CHECK(std::abs(o1.termination.target) < 1e-6);

  const auto a = solve_fixed_points(Parameter(1.1))[1].location;
  const auto o2 = iterate(Parameter(1.1), 0.03, 10000);
  CHECK(o2.termination.kind == Termination::Kind::Converged);
  CHECK(std::abs(o2.termination.target - a) < 1e-6);
}

TEST_CASE("iterate rejects the pole seed and records samples faithfully") {
  CHECK_THROWS_AS(iterate(Parameter(5.0), -1.0, 100), SeedIsPoleError);
  const auto o = iterate(Parameter(2.0), 0.3, 50);
  REQUIRE(!o.samples.empty());
  CHECK(o.samples[0] == 0.3);
  for (std::size_t i = 0; i + 1 < o.samples.size(); ++i)
    CHECK(o.samples[i + 1] == eval_map(2.0, o.samples[i]));
}

TEST_CASE("classify_limit across regimes") {
  CHECK(classify_limit(Parameter(0.9), -0.3, 100000).kind == LimitClass::Kind::ToZero);
  CHECK(classify_limit(Parameter(1.0), 0.4, 1000000).kind == LimitClass::Kind::ToZero);
  CHECK(classify_limit(Parameter(1.1), 0.03, 100000).kind ==
        LimitClass::Kind::ToALambda);
  CHECK(classify_limit(Parameter(lambda_star()), 0.5, 1000000).kind ==
        LimitClass::Kind::ToSqrt2);
}

TEST_CASE("classify_limit detects the attracting 2-cycle at lambda = 12") {
  const auto res = classify_limit(Parameter(12.0), 1.6, 10000);
  REQUIRE(res.kind == LimitClass::Kind::ToCycle);
  REQUIRE(res.cycle.has_value());
  CHECK(std::abs(res.cycle->points[0] - 0.748218) < 1e-4);
  CHECK(std::abs(res.cycle->points[1] - 2.43034) < 1e-4);

  // Independent oracle: the raw orbit tail alternates within 1e-6 of the
  // reported 2-cycle.
  double x = 1.6;
  for (int i = 0; i < 10000; ++i) x = eval_map(12.0, x);
  const double d0 = std::abs(x - res.cycle->points[0]);
  const double d1 = std::abs(x - res.cycle->points[1]);
  CHECK(std::min(d0, d1) < 1e-6);
  const double y = eval_map(12.0, x);
  CHECK(std::min(std::abs(y - res.cycle->points[0]),
                 std::abs(y - res.cycle->points[1])) < 1e-6);
  CHECK(std::abs((d0 < d1 ? res.cycle->points[1] : res.cycle->points[0]) - y) < 1e-6);
}

TEST_CASE("lyapunov estimates") {
  SUBCASE("negative at an attracting fixed point, matching ln|zeta'(a)|") {
    const double a = solve_fixed_points(Parameter(2.0))[1].location;
    const auto est = lyapunov(Parameter(2.0), 0.5, 2000, 0);
    CHECK(est.value < 0.0);
    CHECK(std::abs(est.value - std::log(std::abs(eval_derivative(2.0, a)))) < 0.01);
  }
  SUBCASE("attracting 2-cycle gives half the log of the cycle multiplier") {
    const auto est = lyapunov(Parameter(12.0), 0.7, 2000, 500);
    CHECK(std::abs(est.value - 0.5 * std::log(0.376878)) < 0.01);
  }
  SUBCASE("positive in the chaotic range") {
    CHECK(lyapunov(Parameter(25.0), positive_critical_point(), 2000, 500).value > 0.0);
  }
  SUBCASE("k validation") {
    CHECK_THROWS_AS(lyapunov(Parameter(2.0), 0.5, 50, 0), std::invalid_argument);
  }
}

TEST_CASE("cobweb structure") {
  const auto path = cobweb(Parameter(0.9), 0.05, 10);
  REQUIRE(path.vertices.size() == 21);
  CHECK(path.vertices[0].first == 0.05);
  CHECK(path.vertices[0].second == 0.0);
  // Alternating vertical/horizontal; every horizontal lands on y = x.
  for (std::size_t i = 2; i < path.vertices.size(); i += 2)
    CHECK(path.vertices[i].first == path.vertices[i].second);
  for (std::size_t i = 1; i < path.vertices.size(); i += 2)
    CHECK(path.vertices[i].first == path.vertices[i - 1].first);
  CHECK(std::abs(path.vertices.back().first) < 0.05);
}

TEST_CASE("cobweb x-projections equal iterate samples") {
  const auto path = cobweb(Parameter(1.0), 0.4, 20);
  const auto orbit = iterate(Parameter(1.0), 0.4, 20);
  REQUIRE(path.vertices.size() == 41);
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(path.vertices[2 * k + 1].first == orbit.samples[k]);
    CHECK(path.vertices[2 * k + 2].first == orbit.samples[k + 1]);
  }
  // Monotone decrease toward 0 at lambda = 1 from a positive seed.
  for (std::size_t k = 0; k + 1 < orbit.samples.size(); ++k)
    CHECK(orbit.samples[k + 1] < orbit.samples[k]);
}

TEST_CASE("non-convergent cobweb above lambda*") {
  const auto path = cobweb(Parameter(11.0), 0.2, 50);
  REQUIRE(path.vertices.size() == 101);
  int near_pairs = 0;
  for (std::size_t i = 4; i < path.vertices.size(); i += 2)
    if (std::abs(path.vertices[i].first - path.vertices[i - 2].first) < kConvergenceEps)
      ++near_pairs;
  CHECK(near_pairs == 0);
}

TEST_CASE("monotone convergence for 0 < lambda < 1 on the positive axis") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> ls(0.05, 0.95), xs(1e-3, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double lambda = ls(rng);
    double x = xs(rng);
    for (int i = 0; i < 200 && x > 1e-300; ++i) {
      const double next = eval_map(lambda, x);
      CHECK(next > 0.0);
      CHECK(next < x);
      x = next;
    }
  }
}

TEST_CASE("(-inf,-1) maps into (0,inf)") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> ls(0.1, 40.0), xs(-50.0, -1.001);
  for (int trial = 0; trial < 500; ++trial)
    CHECK(eval_map(ls(rng), xs(rng)) > 0.0);
}

TEST_CASE("bifurcation sweep tracks the attractor") {
  SUBCASE("below lambda = 1 all samples sit at 0") {
    const auto recs = bifurcation_sweep(0.2, 0.95, 20, 2000, 10);
    REQUIRE(recs.size() == 20);
    for (const auto& r : recs) {
      REQUIRE(!r.attractor_samples.empty());
      for (double s : r.attractor_samples) CHECK(std::abs(s) < 1e-6);
    }
  }
  SUBCASE("middle range follows a_lambda") {
    const auto recs = bifurcation_sweep(1.1, 9.0, 20, 20000, 10);
    for (const auto& r : recs) {
      const double a = solve_fixed_points(Parameter(r.lambda))[1].location;
      REQUIRE(!r.attractor_samples.empty());
      for (double s : r.attractor_samples) CHECK(std::abs(s - a) < 1e-6);
    }
  }
  SUBCASE("two branches at lambda = 12") {
    const auto recs = bifurcation_sweep(11.9999, 12.0001, 3, 5000, 20);
    const auto& r = recs[1];
    REQUIRE(r.attractor_samples.size() == 20);
    for (double s : r.attractor_samples) {
      const bool low = std::abs(s - 0.748218) < 1e-3;
      const bool high = std::abs(s - 2.43034) < 1e-3;
      CHECK((low || high));
    }
  }
}

TEST_CASE("sweep is independent of worker count") {
  const auto one = bifurcation_sweep(0.5, 14.0, 97, 3000, 8, SeedRule{}, 1);
  const auto many = bifurcation_sweep(0.5, 14.0, 97, 3000, 8, SeedRule{}, 5);
  REQUIRE(one.size() == many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].lambda == many[i].lambda);
    REQUIRE(one[i].attractor_samples.size() == many[i].attractor_samples.size());
    for (std::size_t j = 0; j < one[i].attractor_samples.size(); ++j)
      CHECK(one[i].attractor_samples[j] == many[i].attractor_samples[j]);
  }
}

TEST_CASE("fixed-seed rule reproduces a chosen start") {
  const auto recs = bifurcation_sweep(2.0, 3.0, 2, 1000, 5,
                                      SeedRule{SeedRule::Kind::FixedSeed, 0.25});
  for (const auto& r : recs) {
    const double a = solve_fixed_points(Parameter(r.lambda))[1].location;
    for (double s : r.attractor_samples) CHECK(std::abs(s - a) < 1e-6);
  }
}
