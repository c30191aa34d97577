#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqrtgreen/rational.hpp"

namespace sqrtgreen {

// Raised for malformed documents and violated configuration invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the phase budgets for a cycle length do not fit inside it.
class InfeasibleCycle : public std::runtime_error {
 public:
  InfeasibleCycle(std::int64_t c, std::int64_t budget_sum);
  std::int64_t cycle_length() const { return c_; }
  std::int64_t budget_sum() const { return budget_sum_; }

 private:
  std::int64_t c_;
  std::int64_t budget_sum_;
};

enum class ArrivalKind { Poisson, Bernoulli };

// Per-slot arrival count distribution of one lane.
struct ArrivalDistribution {
  ArrivalKind kind = ArrivalKind::Poisson;
  Rational mean;

  friend bool operator==(const ArrivalDistribution&, const ArrivalDistribution&) = default;
};

// Standard deviation of the per-slot arrival count.
double sigma_of(const ArrivalDistribution& d);

struct LaneConfig {
  int id = 1;  // 1..N
  ArrivalDistribution arrivals;
  Rational beta{1, 10};

  friend bool operator==(const LaneConfig&, const LaneConfig&) = default;
};

struct PhaseConfig {
  std::vector<int> lanes;  // lane ids receiving green together

  friend bool operator==(const PhaseConfig&, const PhaseConfig&) = default;
};

enum class ControlMode { Fctl, Actuated };

enum class AllRedKind { ScalingResidual, Fixed };

struct AllRedPolicy {
  AllRedKind kind = AllRedKind::ScalingResidual;
  std::int64_t fixed_slots = 0;  // used when kind == Fixed

  static AllRedPolicy scaling() { return {}; }
  static AllRedPolicy fixed(std::int64_t r) { return {AllRedKind::Fixed, r}; }

  // "scaling" or "fixed:<R>"
  static AllRedPolicy parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const AllRedPolicy&, const AllRedPolicy&) = default;
};

// Where the all-red slots go inside a cycle.
enum class AllRedPlacement {
  End,    // one block after the last phase
  Split,  // equal share after every phase, remainder after the last
};

struct ScenarioConfig {
  std::vector<LaneConfig> lanes;
  std::vector<PhaseConfig> phases;
  std::vector<std::int64_t> cycle_lengths;
  ControlMode mode = ControlMode::Actuated;
  AllRedPolicy all_red_policy;
  AllRedPlacement all_red_placement = AllRedPlacement::End;
  std::int64_t cycles_per_run = 100000;
  std::int64_t warmup_cycles = 1000;
  int replications = 4;
  std::uint64_t master_seed = 0;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

std::string to_string(ControlMode m);
ControlMode parse_mode(std::string_view text);
std::string to_string(ArrivalKind k);

// Parses a JSON scenario document. Defaults: warmup_cycles 1000,
// replications 4, mode actuated, all_red_policy scaling, master_seed 0.
ScenarioConfig parse_scenario(std::string_view text);
std::string serialize_scenario(const ScenarioConfig& cfg);

enum class Feasibility {
  Require,  // any infeasible cycle length is an error
  Report,   // infeasible cycle lengths are recorded and skipped
};

// Immutable, checked scenario. Lanes are stored in id order so lane id k
// lives at index k-1.
class ValidatedScenario {
 public:
  const ScenarioConfig& config() const { return *cfg_; }
  const std::vector<LaneConfig>& lanes() const { return cfg_->lanes; }
  const std::vector<PhaseConfig>& phases() const { return cfg_->phases; }
  std::size_t lane_count() const { return cfg_->lanes.size(); }

  const std::vector<std::int64_t>& feasible_cycles() const { return feasible_; }
  const std::vector<InfeasibleCycle>& infeasible_cycles() const { return infeasible_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend ValidatedScenario validate(const ScenarioConfig&, Feasibility);
  std::shared_ptr<const ScenarioConfig> cfg_;
  std::vector<std::int64_t> feasible_;
  std::vector<InfeasibleCycle> infeasible_;
  std::vector<std::string> warnings_;
};

ValidatedScenario validate(const ScenarioConfig& cfg, Feasibility feasibility = Feasibility::Require);

}  // namespace sqrtgreen
