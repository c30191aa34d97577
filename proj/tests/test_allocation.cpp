#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "sqrtgreen/allocation.hpp"
#include "sqrtgreen/presets.hpp"

using namespace sqrtgreen;

namespace {

LaneConfig poisson_lane(int id, Rational lambda, Rational beta = {1, 10}) {
  return {id, {ArrivalKind::Poisson, lambda}, beta};
}

}  // namespace

TEST_CASE("allocate_green: worked values") {
  // 10 + 0.1 * sqrt(1/11) * sqrt(110) = 10.316
  CHECK(allocate_green(poisson_lane(1, {1, 11}), 110) == 11);
  // 50 + 0.1 * sqrt(1/2) * 10 = 50.707
  CHECK(allocate_green(poisson_lane(1, {1, 2}), 100) == 51);
  // no demand: strict-stability floor
  CHECK(allocate_green(poisson_lane(1, {0, 1}), 50) == 1);
  // Example 2a lanes at c = 100
  CHECK(allocate_green(poisson_lane(1, {1, 4}), 100) == 26);
  CHECK(allocate_green(poisson_lane(3, {3, 20}), 100) == 16);
}

TEST_CASE("allocate_green: hedges that land on integers are rounded exactly") {
  // lambda = 5/22: sigma * sqrt(c) = 5 at c = 110 and 10 at c = 440, so
  // beta = i/10 gives lambda*c + hedge = 25.5, 26, 26.5, 27 and 101..104.
  const std::int64_t expected_110[] = {26, 26, 27, 27};
  const std::int64_t expected_440[] = {101, 102, 103, 104};
  for (int i = 1; i <= 4; ++i) {
    const auto lane = poisson_lane(i, {5, 22}, {i, 10});
    CHECK(allocate_green(lane, 110) == expected_110[i - 1]);
    CHECK(allocate_green(lane, 440) == expected_440[i - 1]);
  }
  // Bernoulli 1/2, beta 1: hedge = sqrt(c)/2 = 5 at c = 100, total 55.
  CHECK(allocate_green({1, {ArrivalKind::Bernoulli, {1, 2}}, {1, 1}}, 100) == 55);
}

TEST_CASE("phase_budget") {
  const std::vector<std::int64_t> greens = {26, 21, 16, 31};
  CHECK(phase_budget({{1, 3}}, greens) == 26);
  CHECK(phase_budget({{2}}, greens) == 21);
  const std::vector<std::int64_t> tied = {31, 31};
  CHECK(phase_budget({{1, 2}}, tied) == 31);
}

TEST_CASE("all_red") {
  const std::vector<std::int64_t> budgets = {11, 21, 31, 41};
  CHECK(all_red(110, budgets, AllRedPolicy::scaling()) == 6);
  CHECK(all_red(110, budgets, AllRedPolicy::fixed(4)) == 4);
  const std::vector<std::int64_t> too_big = {26, 26, 26, 26};
  CHECK_THROWS_WITH_AS(all_red(100, too_big, AllRedPolicy::scaling()), doctest::Contains("c=100"), InfeasibleCycle);
}

TEST_CASE("allocate: ex1a at c = 110") {
  const auto alloc = allocate(preset("ex1a"), 110);
  CHECK(alloc.per_lane_green == std::vector<std::int64_t>{11, 21, 31, 41});
  CHECK(alloc.per_phase_budget == std::vector<std::int64_t>{11, 21, 31, 41});
  CHECK(alloc.budget_sum() == 104);
  CHECK(alloc.all_red == 6);
  CHECK(alloc.red_after_phase == std::vector<std::int64_t>{0, 0, 0, 6});
  CHECK(alloc.budget_sum() + alloc.all_red == 110);
  // c = 43: budgets 5 + 9 + 13 + 17 = 44
  CHECK_THROWS_AS(allocate(preset("ex1a"), 43), InfeasibleCycle);
  CHECK(allocate(preset("ex1a"), 44).all_red == 0);
  CHECK(allocate(preset("ex1a"), 50).budget_sum() == 49);
}

TEST_CASE("allocate: split placement spreads all-red over the gaps") {
  auto cfg = preset("ex1a");
  cfg.all_red_placement = AllRedPlacement::Split;
  const auto alloc = allocate(cfg, 110);
  CHECK(alloc.red_after_phase == std::vector<std::int64_t>{1, 1, 1, 3});
}

TEST_CASE("allocate: paired phases take the larger lane budget") {
  const auto alloc = allocate(preset("ex2a"), 100);
  CHECK(alloc.per_phase_budget[0] == std::max(alloc.per_lane_green[0], alloc.per_lane_green[2]));
  CHECK(alloc.per_phase_budget[1] == std::max(alloc.per_lane_green[1], alloc.per_lane_green[3]));
  CHECK(alloc.per_phase_budget[0] == 26);
}

TEST_CASE("property: strict stability, convergence bound and monotonicity in beta") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 1000);
    const std::int64_t num = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den));
    if (num >= den) continue;  // lambda in (0, 1)
    const Rational lambda{num, den};
    const std::int64_t beta_pct = 1 + static_cast<std::int64_t>(rng() % 100);
    const Rational beta{beta_pct, 100};
    const std::int64_t c = 1 + static_cast<std::int64_t>(rng() % 10000);
    const auto kind = (rng() & 1) ? ArrivalKind::Poisson : ArrivalKind::Bernoulli;
    const LaneConfig lane{1, {kind, lambda}, beta};

    const std::int64_t g = allocate_green(lane, c);
    const double lc = lambda.to_double() * static_cast<double>(c);
    const double sigma = sigma_of(lane.arrivals);

    // strict stability, checked exactly: g * den > num * c
    CHECK(static_cast<long double>(g) * den > static_cast<long double>(num) * c);
    // 1 - lambda c / g <= (beta sigma sqrt(c) + 1) / (lambda c)
    CHECK(1.0 - lc / static_cast<double>(g) <=
          (beta.to_double() * sigma * std::sqrt(static_cast<double>(c)) + 1.0) / lc + 1e-12);
    // g is the smallest integer above lambda c + hedge (away from ties)
    const long double target = static_cast<long double>(lc) + beta.to_double() * sigma * std::sqrt(static_cast<long double>(c));
    if (std::abs(target - std::round(target)) > 1e-9) {
      CHECK(g == std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(target)), lambda.floor_times(c) + 1));
    }

    const LaneConfig larger{1, lane.arrivals, Rational(beta_pct + 1 + static_cast<std::int64_t>(rng() % 50), 100)};
    CHECK(allocate_green(larger, c) >= g);
  }
}
