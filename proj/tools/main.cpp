// sqrtgreen: square-root green allocation experiments for isolated
// intersections under fixed-cycle and vehicle-actuated control.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sqrtgreen/experiment.hpp"
#include "sqrtgreen/oracle.hpp"
#include "sqrtgreen/presets.hpp"
#include "sqrtgreen/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

struct SimulateArgs {
  std::string config_path;
  std::string preset_name;
  std::string mode;
  std::string all_red;
  std::vector<std::int64_t> cycle_lengths;
  std::int64_t cycles = 0;
  std::int64_t warmup = -1;
  int replications = 0;
  std::optional<std::uint64_t> seed;
  int parallel = 1;
  std::string out_path;
  std::string trace_path;
};

struct OracleArgs {
  std::int64_t c = 0;
  std::int64_t g = 0;
  std::string dist;
  std::size_t q_max = 512;
};

sqrtgreen::ArrivalDistribution parse_dist(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw sqrtgreen::ConfigError("--dist expects <poisson|bernoulli>:<mean>");
  sqrtgreen::ArrivalDistribution d;
  const auto kind = text.substr(0, colon);
  if (kind == "poisson") {
    d.kind = sqrtgreen::ArrivalKind::Poisson;
  } else if (kind == "bernoulli") {
    d.kind = sqrtgreen::ArrivalKind::Bernoulli;
  } else {
    throw sqrtgreen::ConfigError("unknown distribution '" + kind + "'");
  }
  try {
    d.mean = sqrtgreen::Rational::parse(text.substr(colon + 1));
  } catch (const std::invalid_argument& e) {
    throw sqrtgreen::ConfigError(e.what());
  }
  if (d.kind == sqrtgreen::ArrivalKind::Bernoulli && d.mean > sqrtgreen::Rational(1, 1)) {
    throw sqrtgreen::ConfigError("Bernoulli mean must lie in [0, 1]");
  }
  return d;
}

int run_simulate(const SimulateArgs& args) {
  using namespace sqrtgreen;
  ExperimentPlan plan{ValidatedScenario{}, {}, args.parallel, !args.trace_path.empty()};
  try {
    ScenarioConfig cfg;
    if (!args.preset_name.empty()) {
      cfg = preset(args.preset_name);
    } else {
      std::ifstream in(args.config_path);
      if (!in) {
        std::cerr << "error: cannot read " << args.config_path << "\n";
        return kExitIo;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = parse_scenario(ss.str());
    }
    if (!args.all_red.empty()) cfg.all_red_policy = AllRedPolicy::parse(args.all_red);
    if (!args.cycle_lengths.empty()) cfg.cycle_lengths = args.cycle_lengths;
    if (args.cycles > 0) cfg.cycles_per_run = args.cycles;
    if (args.warmup >= 0) cfg.warmup_cycles = args.warmup;
    if (args.replications > 0) cfg.replications = args.replications;
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.mode.empty()) {
      plan.modes = {cfg.mode};
    } else if (args.mode == "both") {
      plan.modes = {ControlMode::Actuated, ControlMode::Fctl};
    } else {
      plan.modes = {parse_mode(args.mode)};
    }
    plan.scenario = validate(cfg, Feasibility::Report);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (plan.parallelism < 1) {
    std::cerr << "config error: --parallel must be at least 1\n";
    return kExitConfig;
  }
  for (const auto& w : plan.scenario.warnings()) std::cerr << "warning: " << w << "\n";
  for (const auto& e : plan.scenario.infeasible_cycles()) std::cerr << "warning: skipping " << e.what() << "\n";

  const auto result = run_experiment(plan);

  std::ofstream out(args.out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << args.out_path << "\n";
    return kExitIo;
  }
  write_csv(out, result.rows);
  out.close();
  if (!out) {
    std::cerr << "error: failed writing " << args.out_path << "\n";
    return kExitIo;
  }
  if (plan.trace) {
    std::ofstream trace(args.trace_path, std::ios::binary);
    trace << result.trace_csv;
    if (!trace) {
      std::cerr << "error: cannot write " << args.trace_path << "\n";
      return kExitIo;
    }
  }
  return result.skipped.empty() ? kExitOk : kExitInfeasible;
}

int run_oracle(const OracleArgs& args) {
  using namespace sqrtgreen;
  try {
    OracleSettings settings;
    settings.q_max = args.q_max;
    const auto d = parse_dist(args.dist);
    const auto result = fctl_stationary(args.c, args.g, d, settings);
    std::printf("p_empty %.6f\nmean %.6f\n", result.p_empty, result.mean);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const OracleError& e) {
    std::cerr << "oracle error: " << e.what() << "\n";
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Square-root green allocation for fixed-cycle and actuated intersections"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sweep cycle lengths and write per-lane summaries as CSV");
  auto* config_opt = simulate->add_option("--config", sim.config_path, "Scenario JSON file");
  auto* preset_opt = simulate->add_option("--preset", sim.preset_name, "Built-in scenario (see `presets list`)");
  config_opt->excludes(preset_opt);
  simulate->add_option("--mode", sim.mode, "fctl, actuated or both (default: the scenario's mode)")
      ->check(CLI::IsMember({"fctl", "actuated", "both"}));
  simulate->add_option("--all-red", sim.all_red, "scaling or fixed:<R>");
  simulate->add_option("--cycle-lengths", sim.cycle_lengths, "Override the cycle-length sweep")->delimiter(',');
  simulate->add_option("--cycles", sim.cycles, "Cycles per replication, warm-up included");
  simulate->add_option("--warmup", sim.warmup, "Warm-up cycles discarded from each replication");
  simulate->add_option("--replications", sim.replications, "Independent replications per cycle length");
  simulate->add_option("--seed", sim.seed, "Master seed for all arrival streams");
  simulate->add_option("--parallel", sim.parallel, "Worker threads");
  simulate->add_option("--out", sim.out_path, "Output CSV")->required();
  simulate->add_option("--trace", sim.trace_path, "Per-cycle trace of replication 0 (CSV)");

  OracleArgs orc;
  auto* oracle = app.add_subcommand("oracle", "Exact end-of-green metrics of the single-lane fixed-cycle queue");
  oracle->add_option("--c", orc.c, "Cycle length in slots")->required();
  oracle->add_option("--g", orc.g, "Green slots per cycle")->required();
  oracle->add_option("--dist", orc.dist, "<poisson|bernoulli>:<mean>")->required();
  oracle->add_option("--qmax", orc.q_max, "Queue truncation level");

  auto* presets = app.add_subcommand("presets", "Built-in scenarios");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*simulate) {
    if (sim.config_path.empty() && sim.preset_name.empty()) {
      std::cerr << "config error: one of --config or --preset is required\n";
      return kExitConfig;
    }
    return run_simulate(sim);
  }
  if (*oracle) return run_oracle(orc);
  if (*list) {
    for (const auto& name : sqrtgreen::preset_names()) {
      std::cout << name << "  " << sqrtgreen::preset_description(name) << "\n";
    }
  }
  return kExitOk;
}
