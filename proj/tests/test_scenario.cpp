#include <doctest.h>

#include <cmath>
#include <random>

#include "sqrtgreen/presets.hpp"
#include "sqrtgreen/scenario.hpp"

using namespace sqrtgreen;

namespace {

const char* kMinimal = R"({
  "lanes": [{"id": 1, "arrivals": {"kind": "poisson", "mean": "1/4"}, "beta": 0.1}],
  "phases": [{"lanes": [1]}],
  "cycle_lengths": [10],
  "cycles_per_run": 5000
})";

const char* kExample1a = R"({
  "lanes": [
    {"id": 1, "arrivals": {"kind": "poisson", "mean": "1/11"}, "beta": "1/10"},
    {"id": 2, "arrivals": {"kind": "poisson", "mean": "2/11"}, "beta": "1/10"},
    {"id": 3, "arrivals": {"kind": "poisson", "mean": "3/11"}, "beta": "1/10"},
    {"id": 4, "arrivals": {"kind": "poisson", "mean": "4/11"}, "beta": "1/10"}
  ],
  "phases": [{"lanes": [1]}, {"lanes": [2]}, {"lanes": [3]}, {"lanes": [4]}],
  "cycle_lengths": [110, 220, 440, 880],
  "cycles_per_run": 100000,
  "master_seed": 1
})";

}  // namespace

TEST_CASE("rational parsing and exact products") {
  CHECK(Rational::parse("2/22") == Rational(1, 11));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK(Rational::parse("3") == Rational(3, 1));
  CHECK(Rational::parse(" 1/10 ").to_string() == "1/10");
  CHECK_THROWS(Rational::parse("a/b"));
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("-1/2"));

  const Rational lambda{1, 11};
  CHECK(lambda.floor_times(110) == 10);
  CHECK(lambda.frac_times(110) == Rational{});
  CHECK(lambda.floor_times(50) == 4);
  CHECK(lambda.frac_times(50) == Rational(6, 11));
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("parse_scenario: minimal document with defaults") {
  const auto cfg = parse_scenario(kMinimal);
  CHECK(cfg.lanes.size() == 1);
  CHECK(cfg.phases.size() == 1);
  CHECK(cfg.lanes[0].beta == Rational(1, 10));
  CHECK(cfg.warmup_cycles == 1000);
  CHECK(cfg.replications == 4);
  CHECK(cfg.mode == ControlMode::Actuated);
  CHECK(cfg.all_red_policy == AllRedPolicy::scaling());
  CHECK(cfg.all_red_placement == AllRedPlacement::End);
}

TEST_CASE("parse_scenario: the four-lane singleton-phase document matches the ex1a preset") {
  const auto cfg = parse_scenario(kExample1a);
  CHECK(cfg == preset("ex1a"));
  for (int i = 1; i <= 4; ++i) {
    CHECK(cfg.lanes[static_cast<std::size_t>(i - 1)].arrivals.mean == Rational(i, 11));
    CHECK(cfg.phases[static_cast<std::size_t>(i - 1)].lanes == std::vector<int>{i});
  }
}

TEST_CASE("parse_scenario: errors") {
  SUBCASE("unknown lane id in a phase") {
    const char* doc = R"({"lanes": [{"id": 1, "arrivals": {"kind": "poisson", "mean": 0.2}, "beta": 0.1}],
      "phases": [{"lanes": [1, 5]}], "cycle_lengths": [10], "cycles_per_run": 5000})";
    CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("unknown lane id"), ConfigError);
  }
  SUBCASE("syntax error reports line and column") {
    const char* doc = "{\n  \"lanes\": [\n    {\"id\": 1,,}\n  ]\n}";
    CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("line 3"), ConfigError);
  }
  SUBCASE("unknown key") {
    std::string doc = kMinimal;
    doc.insert(doc.rfind('}'), ", \"colour\": 3");
    CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("unknown key 'colour'"), ConfigError);
  }
  SUBCASE("missing required key") {
    const char* doc = R"({"lanes": [], "phases": [], "cycles_per_run": 10})";
    CHECK_THROWS_WITH_AS(parse_scenario(doc), doctest::Contains("missing required key 'cycle_lengths'"), ConfigError);
  }
  SUBCASE("bad all-red policy") {
    std::string doc = kMinimal;
    doc.insert(doc.rfind('}'), ", \"all_red_policy\": \"fixed:x\"");
    CHECK_THROWS_AS(parse_scenario(doc), ConfigError);
  }
}

TEST_CASE("validate: feasibility and invariants") {
  SUBCASE("ex1a at c=110 is feasible") {
    auto cfg = preset("ex1a");
    cfg.cycle_lengths = {110};
    const auto v = validate(cfg);
    CHECK(v.feasible_cycles() == std::vector<std::int64_t>{110});
  }
  SUBCASE("saturated Bernoulli lane") {
    auto cfg = parse_scenario(kMinimal);
    cfg.lanes[0].arrivals = {ArrivalKind::Bernoulli, Rational(1, 1)};
    CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("unstable: g cannot exceed λc within c"), ConfigError);
  }
  SUBCASE("beta must be positive") {
    auto cfg = parse_scenario(kMinimal);
    cfg.lanes[0].beta = Rational{};
    CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("beta must be positive"), ConfigError);
  }
  SUBCASE("lane in no phase") {
    auto cfg = preset("ex1a");
    cfg.phases.pop_back();
    CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("lane 4 belongs to no phase"), ConfigError);
  }
  SUBCASE("cycle lengths strictly increasing") {
    auto cfg = preset("ex1a");
    cfg.cycle_lengths = {220, 110};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SUBCASE("duplicate lane ids") {
    auto cfg = preset("ex1a");
    cfg.lanes[1].id = 1;
    CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("duplicate lane id"), ConfigError);
  }
  SUBCASE("infeasible cycle: error or report") {
    auto cfg = preset("ex1a");
    cfg.cycle_lengths = {43, 110};
    CHECK_THROWS_AS(validate(cfg), InfeasibleCycle);
    const auto v = validate(cfg, Feasibility::Report);
    CHECK(v.feasible_cycles() == std::vector<std::int64_t>{110});
    REQUIRE(v.infeasible_cycles().size() == 1);
    CHECK(v.infeasible_cycles()[0].cycle_length() == 43);
    CHECK(v.infeasible_cycles()[0].budget_sum() == 44);
  }
  SUBCASE("lane in two phases is accepted with a warning") {
    auto cfg = preset("ex1a");
    cfg.phases[1].lanes.push_back(1);
    cfg.cycle_lengths = {220};
    const auto v = validate(cfg);
    REQUIRE(v.warnings().size() == 1);
    CHECK(v.warnings()[0].find("lane 1") != std::string::npos);
  }
  SUBCASE("lanes are stored in id order") {
    auto cfg = preset("ex1a");
    std::swap(cfg.lanes[0], cfg.lanes[3]);
    const auto v = validate(cfg);
    for (std::size_t k = 0; k < v.lane_count(); ++k) CHECK(v.lanes()[k].id == static_cast<int>(k + 1));
  }
}

TEST_CASE("sigma_of") {
  CHECK(sigma_of({ArrivalKind::Poisson, Rational(1, 11)}) == doctest::Approx(std::sqrt(1.0 / 11.0)));
  CHECK(sigma_of({ArrivalKind::Poisson, Rational(1, 11)}) == doctest::Approx(0.30151).epsilon(1e-4));
  CHECK(sigma_of({ArrivalKind::Bernoulli, Rational(3, 20)}) == doctest::Approx(0.35707).epsilon(1e-4));
  CHECK(sigma_of({ArrivalKind::Poisson, Rational{}}) == 0.0);
  CHECK(sigma_of({ArrivalKind::Bernoulli, Rational(1, 1)}) == 0.0);
  CHECK(sigma_of({ArrivalKind::Bernoulli, Rational{}}) == 0.0);
}

TEST_CASE("property: sigma is zero exactly for deterministic distributions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 50);
    const std::int64_t num = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den + 1));
    const ArrivalDistribution b{ArrivalKind::Bernoulli, Rational(num, den)};
    const ArrivalDistribution p{ArrivalKind::Poisson, Rational(num, den)};
    CHECK(sigma_of(b) >= 0.0);
    CHECK((sigma_of(b) == 0.0) == (num == 0 || num == den));
    CHECK((sigma_of(p) == 0.0) == (num == 0));
  }
}

TEST_CASE("property: parse_scenario inverts serialize_scenario") {
  std::mt19937_64 rng(11);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (int trial = 0; trial < 300; ++trial) {
    ScenarioConfig cfg;
    const int n = static_cast<int>(pick(1, 6));
    for (int i = 1; i <= n; ++i) {
      const auto kind = pick(0, 1) == 0 ? ArrivalKind::Poisson : ArrivalKind::Bernoulli;
      const std::int64_t den = pick(1, 400);
      cfg.lanes.push_back({i, {kind, Rational(pick(0, den), den)}, Rational(pick(1, 50), pick(1, 20))});
    }
    const int m = static_cast<int>(pick(1, 4));
    for (int j = 0; j < m; ++j) cfg.phases.push_back({{static_cast<int>(pick(1, n))}});
    std::int64_t c = 0;
    for (int k = 0; k < pick(1, 5); ++k) cfg.cycle_lengths.push_back(c += pick(1, 500));
    cfg.mode = pick(0, 1) == 0 ? ControlMode::Fctl : ControlMode::Actuated;
    cfg.all_red_policy = pick(0, 1) == 0 ? AllRedPolicy::scaling() : AllRedPolicy::fixed(pick(0, 20));
    cfg.all_red_placement = pick(0, 1) == 0 ? AllRedPlacement::End : AllRedPlacement::Split;
    cfg.cycles_per_run = pick(1, 1000000);
    cfg.warmup_cycles = pick(0, 1000);
    cfg.replications = static_cast<int>(pick(1, 16));
    cfg.master_seed = rng();
    CHECK(parse_scenario(serialize_scenario(cfg)) == cfg);
  }
}
