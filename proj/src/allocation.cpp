#include "sqrtgreen/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace sqrtgreen {

std::int64_t AllocationResult::budget_sum() const {
  return std::accumulate(per_phase_budget.begin(), per_phase_budget.end(), std::int64_t{0});
}

namespace {

__extension__ typedef __int128 i128;

// Variance of the per-slot arrival count as an exact fraction.
std::pair<i128, i128> variance_fraction(const ArrivalDistribution& d) {
  const i128 n = d.mean.num();
  const i128 den = d.mean.den();
  if (d.kind == ArrivalKind::Poisson) return {n, den};
  return {n * (den - n), den * den};
}

}  // namespace

std::int64_t allocate_green(const LaneConfig& lane, std::int64_t c) {
  // lambda*c = whole + frac_num/frac_den exactly. The hedge beta*sigma*sqrt(c)
  // is sqrt(hedge_num/hedge_den) with an exact radicand, so the ceiling is
  // settled by integer comparisons rather than floating point.
  const std::int64_t whole = lane.arrivals.mean.floor_times(c);
  const Rational frac = lane.arrivals.mean.frac_times(c);
  const i128 frac_num = frac.num();
  const i128 frac_den = frac.den();
  const auto [var_num, var_den] = variance_fraction(lane.arrivals);
  const i128 hedge_num = i128{lane.beta.num()} * lane.beta.num() * var_num * c;
  const i128 hedge_den = i128{lane.beta.den()} * lane.beta.den() * var_den;

  // covers(m) <=> m >= frac + hedge
  auto covers = [&](std::int64_t m) {
    const i128 gap = i128{m} * frac_den - frac_num;  // (m - frac) * frac_den
    if (gap < 0) return false;
    return gap * gap * hedge_den >= hedge_num * frac_den * frac_den;
  };

  const double approx = frac.to_double() + lane.beta.to_double() * sigma_of(lane.arrivals) *
                                               std::sqrt(static_cast<double>(c));
  auto above = static_cast<std::int64_t>(std::ceil(approx));
  while (above > 0 && covers(above - 1)) --above;
  while (!covers(above)) ++above;
  return whole + std::max<std::int64_t>(above, 1);
}

std::int64_t phase_budget(const PhaseConfig& phase, std::span<const std::int64_t> greens) {
  std::int64_t best = 0;
  for (int id : phase.lanes) best = std::max(best, greens[static_cast<std::size_t>(id - 1)]);
  return best;
}

std::int64_t all_red(std::int64_t c, std::span<const std::int64_t> budgets, const AllRedPolicy& policy) {
  if (policy.kind == AllRedKind::Fixed) return policy.fixed_slots;
  const std::int64_t sum = std::accumulate(budgets.begin(), budgets.end(), std::int64_t{0});
  if (sum > c) throw InfeasibleCycle(c, sum);
  return c - sum;
}

AllocationResult allocate(const ScenarioConfig& cfg, std::int64_t c) {
  AllocationResult out;
  out.cycle_length = c;
  out.per_lane_green.assign(cfg.lanes.size(), 0);
  for (const auto& lane : cfg.lanes) {
    out.per_lane_green[static_cast<std::size_t>(lane.id - 1)] = allocate_green(lane, c);
  }
  out.per_phase_budget.reserve(cfg.phases.size());
  for (const auto& phase : cfg.phases) out.per_phase_budget.push_back(phase_budget(phase, out.per_lane_green));
  out.all_red = all_red(c, out.per_phase_budget, cfg.all_red_policy);

  const auto m = static_cast<std::int64_t>(cfg.phases.size());
  out.red_after_phase.assign(cfg.phases.size(), 0);
  if (cfg.all_red_placement == AllRedPlacement::End || m == 0) {
    if (m > 0) out.red_after_phase.back() = out.all_red;
  } else {
    const std::int64_t share = out.all_red / m;
    std::fill(out.red_after_phase.begin(), out.red_after_phase.end(), share);
    out.red_after_phase.back() += out.all_red - share * m;
  }
  return out;
}

AllocationResult allocate(const ValidatedScenario& scenario, std::int64_t c) {
  return allocate(scenario.config(), c);
}

}  // namespace sqrtgreen
