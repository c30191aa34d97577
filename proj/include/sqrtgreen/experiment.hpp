#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sqrtgreen/scenario.hpp"
#include "sqrtgreen/stats.hpp"

namespace sqrtgreen {

inline constexpr std::string_view kCsvHeader =
    "c,lane,mode,all_red_policy,g,G_phase,rho_lane,rho_weighted,p_empty,p_empty_ci,mean_queue,mean_queue_ci,"
    "mean_queue_norm,replications,cycles";

inline constexpr std::string_view kTraceHeader = "c,mode,cycle,phase,duration,lane,sample";

struct ExperimentPlan {
  ValidatedScenario scenario;
  std::vector<ControlMode> modes;  // each mode runs over the full sweep
  int parallelism = 1;
  bool trace = false;  // keep a per-cycle trace of replication 0
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;  // sorted by (c, mode, lane)
  std::vector<InfeasibleCycle> skipped;
  std::string trace_csv;  // kTraceHeader rows when ExperimentPlan::trace is set
};

/// Runs every feasible cycle length for every requested mode, replications
/// fanned out over `parallelism` workers. The result does not depend on the
/// worker count.
ExperimentResult run_experiment(const ExperimentPlan& plan);

/// End-of-access summary of one replication for every lane, warm-up removed.
/// FCTL mode is the same intersection with every phase held for its budget.
std::vector<ReplicationSummary> run_replication(const ValidatedScenario& scenario, std::int64_t c, ControlMode mode,
                                                std::uint32_t replication, std::string* trace = nullptr);

void write_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
std::string format_row(const SummaryRow& row);

// Parses a file written by write_csv. Throws std::runtime_error on a bad header
// or malformed row.
std::vector<SummaryRow> read_csv(std::istream& is);

}  // namespace sqrtgreen
