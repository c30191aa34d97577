#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sqrtgreen/scenario.hpp"

namespace sqrtgreen {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Queue-length distribution on 0..q_max.
struct ExactDistribution {
  std::vector<double> probabilities;
  double tail_mass_bound = 0.0;  // mass that overflowed q_max in the last step

  static ExactDistribution point_mass(std::size_t at, std::size_t q_max);
  double mean() const;
  double total() const;
};

// Per-slot arrival pmf truncated to 0..q_max.
std::vector<double> arrival_pmf(const ArrivalDistribution& d, std::size_t q_max);

/// Pushes a cycle-start distribution through `green` green slots followed by
/// c - green red slots. Mass beyond q_max is dropped and reported in
/// tail_mass_bound; more than `tail_tolerance` of it throws OracleError.
ExactDistribution fctl_transition(const ExactDistribution& pi, std::int64_t c, std::int64_t green,
                                  const ArrivalDistribution& d, std::size_t q_max, double tail_tolerance = 1e-10);

struct FctlStationary {
  ExactDistribution cycle_start;
  double p_empty = 0.0;  // at the end of green
  double mean = 0.0;     // at the end of green
  std::int64_t iterations = 0;
};

struct OracleSettings {
  std::size_t q_max = 512;
  double tail_tolerance = 1e-10;
  double tv_tolerance = 1e-12;
  std::int64_t max_iterations = 200000;
};

/// Stationary cycle-start distribution of the single-lane fixed-cycle queue by
/// power iteration, plus the empty probability and mean at the end of green.
FctlStationary fctl_stationary(std::int64_t c, std::int64_t green, const ArrivalDistribution& d,
                               const OracleSettings& settings = {});

}  // namespace sqrtgreen
