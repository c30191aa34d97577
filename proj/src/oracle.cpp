#include "sqrtgreen/oracle.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace sqrtgreen {

ExactDistribution ExactDistribution::point_mass(std::size_t at, std::size_t q_max) {
  ExactDistribution d;
  d.probabilities.assign(q_max + 1, 0.0);
  d.probabilities.at(at) = 1.0;
  return d;
}

double ExactDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) m += static_cast<double>(k) * probabilities[k];
  return m;
}

double ExactDistribution::total() const { return std::accumulate(probabilities.begin(), probabilities.end(), 0.0); }

std::vector<double> arrival_pmf(const ArrivalDistribution& d, std::size_t q_max) {
  const double m = d.mean.to_double();
  std::vector<double> pmf;
  if (d.kind == ArrivalKind::Bernoulli) {
    pmf = {1.0 - m, m};
  } else {
    double p = std::exp(-m);
    for (std::size_t k = 0; k <= q_max; ++k) {
      pmf.push_back(p);
      p *= m / static_cast<double>(k + 1);
      if (p < 1e-300) break;
    }
  }
  while (pmf.size() > 1 && pmf.back() == 0.0) pmf.pop_back();
  return pmf;
}

namespace {

// One slot in distribution; returns overflow mass.
double push_slot(std::vector<double>& dist, std::vector<double>& scratch, const std::vector<double>& pmf,
                 bool green) {
  const std::size_t size = dist.size();
  std::fill(scratch.begin(), scratch.end(), 0.0);
  double overflow = 0.0;
  for (std::size_t x = 0; x < size; ++x) {
    const double px = dist[x];
    if (px == 0.0) continue;
    if (green && x == 0) {
      scratch[0] += px;
      continue;
    }
    const std::size_t base = green ? x - 1 : x;
    for (std::size_t a = 0; a < pmf.size(); ++a) {
      const std::size_t y = base + a;
      if (y < size) {
        scratch[y] += px * pmf[a];
      } else {
        overflow += px * pmf[a];
      }
    }
  }
  dist.swap(scratch);
  return overflow;
}

}  // namespace

ExactDistribution fctl_transition(const ExactDistribution& pi, std::int64_t c, std::int64_t green,
                                  const ArrivalDistribution& d, std::size_t q_max, double tail_tolerance) {
  const auto pmf = arrival_pmf(d, q_max);
  ExactDistribution out;
  out.probabilities = pi.probabilities;
  out.probabilities.resize(q_max + 1, 0.0);
  std::vector<double> scratch(q_max + 1, 0.0);
  double overflow = 0.0;
  for (std::int64_t s = 0; s < c; ++s) overflow += push_slot(out.probabilities, scratch, pmf, s < green);
  out.tail_mass_bound = overflow;
  if (overflow > tail_tolerance) {
    throw OracleError("truncation overflow: mass " + std::to_string(overflow) + " beyond q_max=" +
                      std::to_string(q_max) + "; use a larger q_max");
  }
  return out;
}

FctlStationary fctl_stationary(std::int64_t c, std::int64_t green, const ArrivalDistribution& d,
                               const OracleSettings& settings) {
  if (green < 1 || green > c) throw OracleError("green time must lie in [1, c]");
  // Stability needs green > lambda * c.
  if (!(Rational(green, 1) > Rational(d.mean.num() * c, d.mean.den()))) {
    throw OracleError("unstable: g=" + std::to_string(green) + " does not exceed lambda*c=" +
                      std::to_string(d.mean.to_double() * static_cast<double>(c)) + "; no stationary distribution");
  }

  FctlStationary result;
  ExactDistribution pi = ExactDistribution::point_mass(0, settings.q_max);
  for (std::int64_t it = 1; it <= settings.max_iterations; ++it) {
    ExactDistribution next = fctl_transition(pi, c, green, d, settings.q_max, settings.tail_tolerance);
    const double total = next.total();
    for (auto& p : next.probabilities) p /= total;
    double tv = 0.0;
    for (std::size_t k = 0; k < next.probabilities.size(); ++k) tv += std::abs(next.probabilities[k] - pi.probabilities[k]);
    tv *= 0.5;
    pi = std::move(next);
    if (tv < settings.tv_tolerance) {
      result.iterations = it;
      result.cycle_start = pi;
      std::vector<double> end = pi.probabilities;
      std::vector<double> scratch(end.size(), 0.0);
      const auto pmf = arrival_pmf(d, settings.q_max);
      for (std::int64_t s = 0; s < green; ++s) push_slot(end, scratch, pmf, true);
      ExactDistribution end_of_green{end, 0.0};
      result.p_empty = end[0];
      result.mean = end_of_green.mean();
      return result;
    }
  }
  throw OracleError("power iteration did not converge within " + std::to_string(settings.max_iterations) +
                    " iterations");
}

}  // namespace sqrtgreen
