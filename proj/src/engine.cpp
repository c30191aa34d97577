#include "sqrtgreen/engine.hpp"

#include <algorithm>
#include <utility>

namespace sqrtgreen {

std::vector<std::int64_t> run_fctl(const FctlTiming& timing, std::int64_t cycles, ArrivalStream& stream,
                                   const SlotObserver* observer, int lane_id) {
  std::vector<std::int64_t> samples;
  samples.reserve(static_cast<std::size_t>(std::max<std::int64_t>(cycles, 0)));
  const std::int64_t c = timing.cycle();
  const std::int64_t green_end = timing.offset + timing.green;
  std::int64_t x = 0;
  for (std::int64_t k = 0; k < cycles; ++k) {
    for (std::int64_t s = 0; s < c; ++s) {
      const SlotType type = (s >= timing.offset && s < green_end) ? SlotType::Green : SlotType::Red;
      const std::uint64_t slot = stream.position();
      const std::uint32_t a = stream.next();
      x = fctl_slot_step(x, type, a);
      if (observer) (*observer)({slot, lane_id, type, a, x});
      if (s + 1 == green_end) samples.push_back(x);
    }
  }
  return samples;
}

namespace {

// Advances every lane by one slot. `green` marks the lanes holding green.
inline void step_all(std::span<LaneState> states, std::span<ArrivalStream> streams, std::span<const char> green,
                     std::vector<LaneCycleFlow>& flows, const SlotObserver* observer) {
  const std::size_t n = states.size();
  const std::uint64_t slot = streams.empty() ? 0 : streams[0].position();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t a = streams[i].next();
    std::int64_t& x = states[i].queue;
    LaneCycleFlow& f = flows[i];
    if (green[i]) {
      if (x > 0) {
        x += static_cast<std::int64_t>(a) - 1;
        f.joined += a;
        ++f.departures;
        ++f.green_slots_nonempty;
      } else {
        f.passed_through += a;
      }
    } else {
      x += a;
      f.joined += a;
    }
    if (observer) (*observer)({slot, static_cast<int>(i + 1), green[i] ? SlotType::Green : SlotType::Red, a, x});
  }
}

}  // namespace

void run_cycle_actuated(std::span<LaneState> states, const AllocationResult& alloc, std::span<const PhaseConfig> phases,
                        std::span<ArrivalStream> streams, const EngineOptions& options, CycleRecord& out) {
  const std::size_t n = states.size();
  out.phase_durations.assign(phases.size(), 0);
  out.red_durations.assign(phases.size(), 0);
  out.samples.clear();
  out.flows.assign(n, LaneCycleFlow{});
  out.cycle_length = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.flows[i].start_queue = states[i].queue;
    states[i].end_of_access_sample.reset();
  }

  std::vector<char> green(n, 0);
  const std::vector<char> all_red(n, 0);
  for (std::size_t j = 0; j < phases.size(); ++j) {
    const auto& members = phases[j].lanes;
    std::fill(green.begin(), green.end(), 0);
    for (int id : members) green[static_cast<std::size_t>(id - 1)] = 1;

    const std::int64_t budget = alloc.per_phase_budget[j];
    std::int64_t duration = 0;
    while (duration < budget) {
      if (options.early_termination &&
          std::all_of(members.begin(), members.end(),
                      [&](int id) { return states[static_cast<std::size_t>(id - 1)].queue == 0; })) {
        break;
      }
      step_all(states, streams, green, out.flows, options.observer);
      ++duration;
    }
    out.phase_durations[j] = duration;
    for (int id : members) {
      auto& lane = states[static_cast<std::size_t>(id - 1)];
      lane.end_of_access_sample = lane.queue;
      out.samples.push_back({id, static_cast<int>(j), lane.queue});
    }

    const std::int64_t red = alloc.red_after_phase[j];
    for (std::int64_t s = 0; s < red; ++s) step_all(states, streams, all_red, out.flows, options.observer);
    out.red_durations[j] = red;
    out.cycle_length += duration + red;
  }
  for (std::size_t i = 0; i < n; ++i) out.flows[i].end_queue = states[i].queue;
}

CycleRecord run_cycle_actuated(std::span<LaneState> states, const AllocationResult& alloc,
                               std::span<const PhaseConfig> phases, std::span<ArrivalStream> streams,
                               const EngineOptions& options) {
  CycleRecord out;
  run_cycle_actuated(states, alloc, phases, streams, options, out);
  return out;
}

Intersection::Intersection(const ValidatedScenario& scenario, AllocationResult alloc, std::uint32_t replication,
                           EngineOptions options)
    : scenario_(&scenario), alloc_(std::move(alloc)), options_(options), states_(scenario.lane_count()) {
  streams_.reserve(scenario.lane_count());
  for (const auto& lane : scenario.lanes()) {
    streams_.push_back(make_stream(
        {scenario.config().master_seed, static_cast<std::uint32_t>(lane.id), replication}, lane.arrivals));
  }
}

void Intersection::run_cycle(CycleRecord& out) {
  run_cycle_actuated(states_, alloc_, scenario_->phases(), streams_, options_, out);
}

CycleRecord Intersection::run_cycle() {
  CycleRecord out;
  run_cycle(out);
  return out;
}

std::vector<CycleRecord> run_actuated(const ValidatedScenario& scenario, std::int64_t c, std::uint32_t replication,
                                      const EngineOptions& options) {
  Intersection sim(scenario, allocate(scenario, c), replication, options);
  std::vector<CycleRecord> out(static_cast<std::size_t>(scenario.config().cycles_per_run));
  for (auto& record : out) sim.run_cycle(record);
  return out;
}

}  // namespace sqrtgreen
