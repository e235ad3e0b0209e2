#include <cmath>
#include <random>

#include <doctest.h>

#include "merodyn/fixed_points.hpp"

using namespace merodyn;

TEST_CASE("fixed points for lambda = 0.5") {
  const auto fps = solve_fixed_points(Parameter(0.5));
  REQUIRE(fps.size() == 2);
  CHECK(fps[0].is_origin);
  CHECK(fps[0].multiplier == doctest::Approx(0.5));
  CHECK(fps[0].stability == Stability::Attracting);
  CHECK(std::abs(fps[1].location + 0.314923) < 1e-5);
  CHECK(fps[1].stability == Stability::Repelling);
}

TEST_CASE("fixed points for lambda = 2") {
  const auto fps = solve_fixed_points(Parameter(2.0));
  REQUIRE(fps.size() == 2);
  CHECK(fps[0].multiplier == doctest::Approx(2.0));
  CHECK(fps[0].stability == Stability::Repelling);
  CHECK(std::abs(fps[1].location - 0.374823) < 1e-5);
  CHECK(fps[1].stability == Stability::Attracting);
}

TEST_CASE("fixed points at lambda = 1 and lambda = lambda*") {
  const auto at_one = solve_fixed_points(Parameter(1.0));
  REQUIRE(at_one.size() == 1);
  CHECK(at_one[0].is_origin);
  CHECK(at_one[0].stability == Stability::RationallyIndifferent);

  const auto at_star = solve_fixed_points(Parameter(lambda_star()));
  REQUIRE(at_star.size() == 2);
  CHECK(at_star[0].stability == Stability::Repelling);
  CHECK(at_star[1].location == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(at_star[1].stability == Stability::RationallyIndifferent);
  CHECK(std::abs(std::abs(at_star[1].multiplier) - 1.0) < 1e-9);
}

TEST_CASE("classify_fixed_point at the origin") {
  CHECK(classify_fixed_point(Parameter(0.9), 0.0).stability == Stability::Attracting);
  CHECK(classify_fixed_point(Parameter(1.0), 0.0).stability ==
        Stability::RationallyIndifferent);
  const auto rec = classify_fixed_point(Parameter(11.0), 0.0);
  CHECK(rec.stability == Stability::Repelling);
  CHECK(rec.multiplier == doctest::Approx(11.0));
  CHECK_THROWS_AS(classify_fixed_point(Parameter(2.0), 0.5), NotAFixedPointError);
}

TEST_CASE("tolerance validation") {
  CHECK_THROWS_AS(solve_fixed_points(Parameter(2.0), 0.0), ToleranceError);
  CHECK_THROWS_AS(solve_fixed_points(Parameter(2.0), 1e-30), ToleranceError);
}

TEST_CASE("2-cycles reported in the source") {
  SUBCASE("lambda = 12: attracting") {
    const auto cycles = find_cycles(Parameter(12.0), 2, 0.01, 6.0);
    REQUIRE(cycles.size() == 1);
    const auto& c = cycles[0];
    REQUIRE(c.points.size() == 2);
    CHECK(std::abs(c.points[0] - 0.748218) < 1e-4);
    CHECK(std::abs(c.points[1] - 2.43034) < 1e-4);
    CHECK(std::abs(std::abs(c.multiplier) - 0.376878) < 1e-3);
    CHECK(c.stability == Stability::Attracting);
  }
  SUBCASE("lambda = 18.5: repelling") {
    const auto cycles = find_cycles(Parameter(18.5), 2, 0.01, 6.0);
    REQUIRE(cycles.size() == 1);
    CHECK(std::abs(cycles[0].points[0] - 0.408442) < 1e-4);
    CHECK(std::abs(cycles[0].points[1] - 3.56598) < 1e-4);
    CHECK(std::abs(std::abs(cycles[0].multiplier) - 1.00932) < 1e-3);
    CHECK(cycles[0].stability == Stability::Repelling);
  }
  SUBCASE("lambda = 18.44505: indifferent") {
    const auto cycles = find_cycles(Parameter(18.44505), 2, 0.01, 6.0);
    REQUIRE(cycles.size() == 1);
    CHECK(std::abs(cycles[0].points[0] - 0.409865) < 1e-4);
    CHECK(std::abs(cycles[0].points[1] - 3.55911) < 1e-4);
    CHECK(std::abs(std::abs(cycles[0].multiplier) - 1.0) < 1e-3);
    CHECK(cycles[0].stability == Stability::RationallyIndifferent);
  }
}

TEST_CASE("no proper 2-cycle below lambda*") {
  // Brute scan of zeta^2(x) - x at lambda = 2 finds only the fixed points.
  CHECK(find_cycles(Parameter(2.0), 2, 0.01, 6.0).empty());
}

TEST_CASE("regime consistency of the nonzero fixed point") {
  std::mt19937 rng(19);
  const double ls = lambda_star();
  auto check_range = [&](double lo, double hi, double xlo, double xhi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    for (int i = 0; i < 1000; ++i) {
      const auto fps = solve_fixed_points(Parameter(dist(rng)));
      REQUIRE(fps.size() == 2);
      CHECK(fps[1].location > xlo);
      CHECK(fps[1].location < xhi);
    }
  };
  check_range(1e-6, 1.0 - 1e-9, -1.0, 0.0);
  check_range(1.0 + 1e-9, ls - 1e-9, 0.0, std::sqrt(2.0));
  check_range(ls + 1e-9, 50.0, std::sqrt(2.0), HUGE_VAL);
}

TEST_CASE("solved roots bracket a strictly increasing residual") {
  for (double lambda : {0.3, 0.7, 2.0, 5.0, 20.0}) {
    const auto fps = solve_fixed_points(Parameter(lambda));
    const double x = fps[1].location;
    const double w = 1e-6;
    const double ga = detail::fp_residual(x - w, lambda);
    const double gb = detail::fp_residual(x + w, lambda);
    CHECK(ga < 0.0);
    CHECK(gb > 0.0);
    CHECK(detail::fp_residual(x, lambda) > ga);
    CHECK(detail::fp_residual(x, lambda) < gb);
  }
}

TEST_CASE("cycle closure and multiplier invariance") {
  const Parameter p(12.0);
  const auto cycles = find_cycles(p, 2, 0.01, 6.0);
  REQUIRE(cycles.size() == 1);
  const auto& c = cycles[0];

  double x = c.points[0];
  for (int i = 0; i < c.period; ++i) x = eval_map(p, x);
  CHECK(std::abs(x - c.points[0]) < 10.0 * kDefaultRootTol);
  CHECK(std::abs(eval_map(p, c.points[0]) - c.points[1]) < 10.0 * kDefaultRootTol);

  PeriodicCycle rotated = c;
  std::rotate(rotated.points.begin(), rotated.points.begin() + 1, rotated.points.end());
  const auto m1 = cycle_multiplier(p, c);
  const auto m2 = cycle_multiplier(p, rotated);
  CHECK(std::abs(m1.multiplier - m2.multiplier) < 1e-12);
  CHECK(m1.stability == m2.stability);
}

TEST_CASE("period-4 search filters the 2-cycle out") {
  // Just above the flip at 18.445 the 2-cycle goes repelling and an
  // attracting 4-cycle appears.
  const auto c4 = find_attracting_cycle(Parameter(18.5));
  REQUIRE(c4.has_value());
  CHECK(c4->period == 4);
  CHECK(c4->stability == Stability::Attracting);
  double x = c4->points[0];
  for (int i = 0; i < 4; ++i) x = eval_map(Parameter(18.5), x);
  CHECK(std::abs(x - c4->points[0]) < 1e-9);
}
