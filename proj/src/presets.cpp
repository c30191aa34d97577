#include "sqrtgreen/presets.hpp"

namespace sqrtgreen {

namespace {

ScenarioConfig four_leg(const std::vector<Rational>& lambdas, const std::vector<Rational>& betas,
                        std::vector<PhaseConfig> phases) {
  ScenarioConfig cfg;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    cfg.lanes.push_back({static_cast<int>(i + 1), {ArrivalKind::Poisson, lambdas[i]}, betas[i]});
  }
  cfg.phases = std::move(phases);
  cfg.cycle_lengths = {110, 220, 440, 880};
  cfg.mode = ControlMode::Actuated;
  cfg.cycles_per_run = 100000;
  cfg.warmup_cycles = 1000;
  cfg.replications = 4;
  cfg.master_seed = 1;
  return cfg;
}

const std::vector<PhaseConfig> kSingletonPhases = {{{1}}, {{2}}, {{3}}, {{4}}};
const std::vector<PhaseConfig> kPairedPhases = {{{1, 3}}, {{2, 4}}};
const Rational kTenth{1, 10};

}  // namespace

ScenarioConfig preset(std::string_view name) {
  if (name == "ex1a") {
    return four_leg({{1, 11}, {2, 11}, {3, 11}, {4, 11}}, {kTenth, kTenth, kTenth, kTenth}, kSingletonPhases);
  }
  if (name == "ex1b") {
    return four_leg({{5, 22}, {5, 22}, {5, 22}, {5, 22}}, {{1, 10}, {2, 10}, {3, 10}, {4, 10}}, kSingletonPhases);
  }
  if (name == "ex2a") {
    return four_leg({{1, 4}, {1, 2}, {3, 20}, {3, 10}}, {kTenth, kTenth, kTenth, kTenth}, kPairedPhases);
  }
  if (name == "ex2b") {
    return four_leg({{1, 4}, {1, 2}, {1, 4}, {1, 2}}, {kTenth, kTenth, kTenth, kTenth}, kPairedPhases);
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"ex1a", "ex1b", "ex2a", "ex2b"}; }

std::string preset_description(std::string_view name) {
  if (name == "ex1a") return "4 lanes, one per phase, Poisson lambda_i = i/11, beta = 0.1";
  if (name == "ex1b") return "4 lanes, one per phase, Poisson lambda = 5/22, beta_i = i/10";
  if (name == "ex2a") return "4 lanes, phases {1,3},{2,4}, Poisson lambda = (1/4, 1/2, 3/20, 3/10), beta = 0.1";
  if (name == "ex2b") return "4 lanes, phases {1,3},{2,4}, Poisson lambda = (1/4, 1/2, 1/4, 1/2), beta = 0.1";
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace sqrtgreen
