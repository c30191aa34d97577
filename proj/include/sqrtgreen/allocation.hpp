#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sqrtgreen/scenario.hpp"

namespace sqrtgreen {

// Green budgets for one cycle length. Vectors are indexed by lane id - 1 and
// by phase position respectively.
struct AllocationResult {
  std::int64_t cycle_length = 0;
  std::vector<std::int64_t> per_lane_green;
  std::vector<std::int64_t> per_phase_budget;
  std::int64_t all_red = 0;
  // All-red slots inserted after each phase; sums to all_red.
  std::vector<std::int64_t> red_after_phase;

  std::int64_t budget_sum() const;
};

/// Square-root green budget for one lane:
/// max(ceil(lambda*c + beta*sigma*sqrt(c)), floor(lambda*c) + 1).
/// The result always strictly exceeds lambda*c.
std::int64_t allocate_green(const LaneConfig& lane, std::int64_t c);

/// Phase budget: the largest green budget among the phase's lanes.
/// `greens` is indexed by lane id - 1.
std::int64_t phase_budget(const PhaseConfig& phase, std::span<const std::int64_t> greens);

/// All-red time. ScalingResidual yields c minus the budget sum and throws
/// InfeasibleCycle when that would be negative; Fixed(R) yields R.
std::int64_t all_red(std::int64_t c, std::span<const std::int64_t> budgets, const AllRedPolicy& policy);

// Full allocation for cycle length c. Throws InfeasibleCycle.
AllocationResult allocate(const ScenarioConfig& cfg, std::int64_t c);
AllocationResult allocate(const ValidatedScenario& scenario, std::int64_t c);

}  // namespace sqrtgreen
