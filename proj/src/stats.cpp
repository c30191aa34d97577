#include "sqrtgreen/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

namespace sqrtgreen {

SampleSummary SampleAccumulator::summary(std::int64_t c) const {
  if (count == 0) throw StatsError("cannot summarize an empty sample set");
  SampleSummary s;
  s.p_empty = static_cast<double>(zeros) / static_cast<double>(count);
  s.mean_queue = static_cast<double>(sum) / static_cast<double>(count);
  s.mean_queue_normalized = s.mean_queue / std::sqrt(static_cast<double>(c));
  return s;
}

SampleSummary summarize(std::span<const std::int64_t> samples, std::int64_t c) {
  SampleAccumulator acc;
  for (auto x : samples) acc.add(x);
  return acc.summary(c);
}

RhoResult rho(const ScenarioConfig& cfg, const AllocationResult& alloc, std::int64_t c) {
  RhoResult out;
  out.per_lane.assign(cfg.lanes.size(), 0.0);
  double total_rate = 0.0;
  for (const auto& lane : cfg.lanes) total_rate += lane.arrivals.mean.to_double();
  for (const auto& lane : cfg.lanes) {
    const auto k = static_cast<std::size_t>(lane.id - 1);
    const double lambda = lane.arrivals.mean.to_double();
    out.per_lane[k] = lambda * static_cast<double>(c) / static_cast<double>(alloc.per_lane_green[k]);
    if (total_rate > 0.0) out.weighted += lambda / total_rate * out.per_lane[k];
  }
  return out;
}

double t_quantile_975(int n) {
  if (n < 2) throw StatsError("need >= 2 replications for a confidence interval");
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::quantile(dist, 0.975);
}

namespace {

// Sorting first makes the result independent of replication order.
std::pair<double, double> mean_and_halfwidth(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, t_quantile_975(static_cast<int>(values.size())) * sd / std::sqrt(n)};
}

}  // namespace

SummaryRow aggregate_replications(std::span<const ReplicationSummary> reps) {
  if (reps.size() < 2) throw StatsError("need >= 2 replications for a confidence interval");
  const auto& first = reps.front();
  std::vector<double> p, m;
  for (const auto& r : reps) {
    if (r.c != first.c || r.lane != first.lane || r.mode != first.mode) {
      throw StatsError("mismatched replication metadata");
    }
    p.push_back(r.p_empty);
    m.push_back(r.mean_queue);
  }
  SummaryRow row;
  row.c = first.c;
  row.lane = first.lane;
  row.mode = first.mode;
  row.replications = static_cast<int>(reps.size());
  std::tie(row.p_empty, row.p_empty_ci) = mean_and_halfwidth(std::move(p));
  std::tie(row.mean_queue, row.mean_queue_ci) = mean_and_halfwidth(std::move(m));
  row.mean_queue_norm = row.mean_queue / std::sqrt(static_cast<double>(row.c));
  return row;
}

}  // namespace sqrtgreen
