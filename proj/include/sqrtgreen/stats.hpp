#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqrtgreen/allocation.hpp"
#include "sqrtgreen/scenario.hpp"

namespace sqrtgreen {

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SampleSummary {
  double p_empty = 0.0;
  double mean_queue = 0.0;
  double mean_queue_normalized = 0.0;  // mean_queue / sqrt(c)
};

// Streaming counterpart of summarize().
struct SampleAccumulator {
  std::int64_t count = 0;
  std::int64_t zeros = 0;
  std::int64_t positives = 0;
  std::int64_t sum = 0;

  void add(std::int64_t sample) {
    ++count;
    sum += sample;
    if (sample == 0) {
      ++zeros;
    } else {
      ++positives;
    }
  }
  SampleSummary summary(std::int64_t c) const;
};

SampleSummary summarize(std::span<const std::int64_t> samples, std::int64_t c);

struct RhoResult {
  std::vector<double> per_lane;  // lambda_i * c / g_i, indexed by lane id - 1
  double weighted = 0.0;         // lambda-weighted average of per_lane
};

RhoResult rho(const ScenarioConfig& cfg, const AllocationResult& alloc, std::int64_t c);

// One replication's end-of-access summary for one lane.
struct ReplicationSummary {
  std::int64_t c = 0;
  int lane = 0;
  ControlMode mode = ControlMode::Actuated;
  double p_empty = 0.0;
  double mean_queue = 0.0;
};

struct SummaryRow {
  std::int64_t c = 0;
  int lane = 0;
  ControlMode mode = ControlMode::Actuated;
  std::string all_red_policy;
  std::int64_t g = 0;
  std::int64_t g_phase = 0;
  double rho_lane = 0.0;
  double rho_weighted = 0.0;
  double p_empty = 0.0;
  double p_empty_ci = 0.0;
  double mean_queue = 0.0;
  double mean_queue_ci = 0.0;
  double mean_queue_norm = 0.0;
  int replications = 0;
  std::int64_t cycles = 0;
};

// Two-sided 95% Student-t quantile with n - 1 degrees of freedom.
double t_quantile_975(int n);

/// Mean over replications with 95% t-interval halfwidths. Fills the
/// identification, estimate and replication fields of the row only.
SummaryRow aggregate_replications(std::span<const ReplicationSummary> reps);

}  // namespace sqrtgreen
