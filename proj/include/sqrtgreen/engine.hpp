#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sqrtgreen/allocation.hpp"
#include "sqrtgreen/arrivals.hpp"
#include "sqrtgreen/scenario.hpp"

namespace sqrtgreen {

enum class SlotType { Green, Red };

// One slot of a single lane. On green a nonempty queue discharges one
// vehicle while the slot's arrivals join; an empty queue stays empty and the
// arrivals pass straight through. On red every arrival joins.
constexpr std::int64_t fctl_slot_step(std::int64_t x, SlotType type, std::int64_t a) {
  if (type == SlotType::Red) return x + a;
  return x > 0 ? x - 1 + a : 0;
}

struct LaneState {
  std::int64_t queue = 0;
  std::optional<std::int64_t> end_of_access_sample;  // set when the lane's access period ends
};

// Emitted after every lane-slot when an observer is attached.
struct SlotEvent {
  std::uint64_t slot = 0;  // global slot index since the start of the run
  int lane = 0;            // lane id
  SlotType type = SlotType::Red;
  std::uint32_t arrivals = 0;
  std::int64_t queue = 0;  // after the slot

  friend bool operator==(const SlotEvent&, const SlotEvent&) = default;
};
using SlotObserver = std::function<void(const SlotEvent&)>;

// Fixed-cycle timing: slots [offset, offset + green) of every cycle are green.
struct FctlTiming {
  std::int64_t green = 1;
  std::int64_t red = 1;
  std::int64_t offset = 0;

  std::int64_t cycle() const { return green + red; }
};

/// Single-lane fixed-cycle queue from an empty start. Returns the queue length
/// at the end of each cycle's green period, one entry per cycle.
std::vector<std::int64_t> run_fctl(const FctlTiming& timing, std::int64_t cycles, ArrivalStream& stream,
                                   const SlotObserver* observer = nullptr, int lane_id = 1);

struct AccessSample {
  int lane = 0;   // lane id
  int phase = 0;  // phase position, 0-based
  std::int64_t queue = 0;
};

// Lane bookkeeping over one cycle. Arrivals at an empty green lane pass
// through and are counted in passed_through, not in joined.
struct LaneCycleFlow {
  std::int64_t start_queue = 0;
  std::int64_t end_queue = 0;
  std::int64_t joined = 0;
  std::int64_t passed_through = 0;
  std::int64_t departures = 0;
  std::int64_t green_slots_nonempty = 0;
};

struct CycleRecord {
  std::vector<std::int64_t> phase_durations;
  std::vector<std::int64_t> red_durations;
  std::vector<AccessSample> samples;  // in phase order
  std::vector<LaneCycleFlow> flows;   // indexed by lane id - 1
  std::int64_t cycle_length = 0;
};

struct EngineOptions {
  // When false every phase runs for its full budget (fixed-time control).
  bool early_termination = true;
  const SlotObserver* observer = nullptr;
};

/// One cycle of actuated control. Phases are served in order; a phase ends at
/// the first slot boundary where all its lanes are empty, or after its budget.
/// `states` and `streams` are indexed by lane id - 1. `out` is overwritten.
void run_cycle_actuated(std::span<LaneState> states, const AllocationResult& alloc, std::span<const PhaseConfig> phases,
                        std::span<ArrivalStream> streams, const EngineOptions& options, CycleRecord& out);
CycleRecord run_cycle_actuated(std::span<LaneState> states, const AllocationResult& alloc,
                               std::span<const PhaseConfig> phases, std::span<ArrivalStream> streams,
                               const EngineOptions& options = {});

// Whole-intersection simulation for one (cycle length, replication), starting
// from empty queues. Lane streams use key (master_seed, lane id, replication).
class Intersection {
 public:
  Intersection(const ValidatedScenario& scenario, AllocationResult alloc, std::uint32_t replication,
               EngineOptions options = {});

  void run_cycle(CycleRecord& out);
  CycleRecord run_cycle();

  const std::vector<LaneState>& lanes() const { return states_; }
  const AllocationResult& allocation() const { return alloc_; }

 private:
  const ValidatedScenario* scenario_;
  AllocationResult alloc_;
  EngineOptions options_;
  std::vector<LaneState> states_;
  std::vector<ArrivalStream> streams_;
};

/// cycles_per_run actuated cycles (warm-up included) for cycle length c.
std::vector<CycleRecord> run_actuated(const ValidatedScenario& scenario, std::int64_t c, std::uint32_t replication,
                                      const EngineOptions& options = {});

}  // namespace sqrtgreen
