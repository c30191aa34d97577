#include "sqrtgreen/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "sqrtgreen/allocation.hpp"
#include "sqrtgreen/engine.hpp"

namespace sqrtgreen {

std::vector<ReplicationSummary> run_replication(const ValidatedScenario& scenario, std::int64_t c, ControlMode mode,
                                                std::uint32_t replication, std::string* trace) {
  const auto& cfg = scenario.config();
  EngineOptions options;
  options.early_termination = mode == ControlMode::Actuated;
  Intersection sim(scenario, allocate(scenario, c), replication, options);

  std::vector<SampleAccumulator> acc(scenario.lane_count());
  CycleRecord record;
  const std::string prefix = std::to_string(c) + "," + to_string(mode) + ",";
  for (std::int64_t k = 0; k < cfg.cycles_per_run; ++k) {
    sim.run_cycle(record);
    if (trace) {
      for (const auto& s : record.samples) {
        *trace += prefix + std::to_string(k) + "," + std::to_string(s.phase + 1) + "," +
                  std::to_string(record.phase_durations[static_cast<std::size_t>(s.phase)]) + "," +
                  std::to_string(s.lane) + "," + std::to_string(s.queue) + "\n";
      }
    }
    if (k < cfg.warmup_cycles) continue;
    for (const auto& s : record.samples) acc[static_cast<std::size_t>(s.lane - 1)].add(s.queue);
  }

  std::vector<ReplicationSummary> out;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const auto summary = acc[i].summary(c);
    out.push_back({c, static_cast<int>(i + 1), mode, summary.p_empty, summary.mean_queue});
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  const auto& scenario = plan.scenario;
  const auto& cfg = scenario.config();
  const auto reps = static_cast<std::size_t>(cfg.replications);

  std::vector<ControlMode> modes = plan.modes;
  std::sort(modes.begin(), modes.end(), [](auto a, auto b) { return to_string(a) < to_string(b); });
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());

  struct Job {
    std::int64_t c;
    ControlMode mode;
    std::uint32_t replication;
  };
  std::vector<Job> jobs;
  for (auto c : scenario.feasible_cycles()) {
    for (auto mode : modes) {
      for (std::size_t r = 0; r < reps; ++r) jobs.push_back({c, mode, static_cast<std::uint32_t>(r)});
    }
  }

  std::vector<std::vector<ReplicationSummary>> results(jobs.size());
  std::vector<std::string> traces(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const auto& job = jobs[k];
      std::string* trace = (plan.trace && job.replication == 0) ? &traces[k] : nullptr;
      results[k] = run_replication(scenario, job.c, job.mode, job.replication, trace);
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, plan.parallelism));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, jobs.size()); ++w) pool.emplace_back(worker);
  }

  ExperimentResult out;
  out.skipped = scenario.infeasible_cycles();
  if (plan.trace) {
    out.trace_csv = std::string(kTraceHeader) + "\n";
    for (const auto& t : traces) out.trace_csv += t;
  }

  const std::size_t n = scenario.lane_count();
  for (std::size_t base = 0; base < jobs.size(); base += reps) {
    const auto c = jobs[base].c;
    const auto alloc = allocate(scenario, c);
    const auto utilization = rho(cfg, alloc, c);
    for (std::size_t lane = 0; lane < n; ++lane) {
      std::vector<ReplicationSummary> per_rep;
      for (std::size_t r = 0; r < reps; ++r) per_rep.push_back(results[base + r][lane]);
      SummaryRow row = aggregate_replications(per_rep);
      row.all_red_policy = cfg.all_red_policy.to_string();
      row.g = alloc.per_lane_green[lane];
      row.g_phase = 0;
      for (std::size_t j = 0; j < cfg.phases.size(); ++j) {
        const auto& members = cfg.phases[j].lanes;
        if (std::find(members.begin(), members.end(), static_cast<int>(lane + 1)) != members.end()) {
          row.g_phase = std::max(row.g_phase, alloc.per_phase_budget[j]);
        }
      }
      row.rho_lane = utilization.per_lane[lane];
      row.rho_weighted = utilization.weighted;
      row.cycles = cfg.cycles_per_run;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

std::string format_row(const SummaryRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%lld,%d,%s,%s,%lld,%lld,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%lld",
                static_cast<long long>(r.c), r.lane, to_string(r.mode).c_str(), r.all_red_policy.c_str(),
                static_cast<long long>(r.g), static_cast<long long>(r.g_phase), r.rho_lane, r.rho_weighted, r.p_empty,
                r.p_empty_ci, r.mean_queue, r.mean_queue_ci, r.mean_queue_norm, r.replications,
                static_cast<long long>(r.cycles));
  return buf;
}

void write_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& row : rows) os << format_row(row) << '\n';
}

std::vector<SummaryRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("unexpected CSV header");
  std::vector<SummaryRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 15) throw std::runtime_error("malformed CSV row: " + line);
    SummaryRow r;
    r.c = std::stoll(f[0]);
    r.lane = std::stoi(f[1]);
    r.mode = parse_mode(f[2]);
    r.all_red_policy = f[3];
    r.g = std::stoll(f[4]);
    r.g_phase = std::stoll(f[5]);
    r.rho_lane = std::stod(f[6]);
    r.rho_weighted = std::stod(f[7]);
    r.p_empty = std::stod(f[8]);
    r.p_empty_ci = std::stod(f[9]);
    r.mean_queue = std::stod(f[10]);
    r.mean_queue_ci = std::stod(f[11]);
    r.mean_queue_norm = std::stod(f[12]);
    r.replications = std::stoi(f[13]);
    r.cycles = std::stoll(f[14]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace sqrtgreen
