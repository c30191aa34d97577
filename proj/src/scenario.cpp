#include "sqrtgreen/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "sqrtgreen/allocation.hpp"

namespace sqrtgreen {

using nlohmann::json;

InfeasibleCycle::InfeasibleCycle(std::int64_t c, std::int64_t budget_sum)
    : std::runtime_error("infeasible cycle length c=" + std::to_string(c) + ": phase budgets sum to " +
                         std::to_string(budget_sum) + " > " + std::to_string(c)),
      c_(c),
      budget_sum_(budget_sum) {}

double sigma_of(const ArrivalDistribution& d) {
  const double m = d.mean.to_double();
  switch (d.kind) {
    case ArrivalKind::Poisson:
      return std::sqrt(m);
    case ArrivalKind::Bernoulli:
      return std::sqrt(m * (1.0 - m));
  }
  return 0.0;
}

AllRedPolicy AllRedPolicy::parse(std::string_view text) {
  if (text == "scaling") return scaling();
  if (text.starts_with("fixed:")) {
    const std::string digits(text.substr(6));
    std::size_t used = 0;
    long long r = -1;
    try {
      r = std::stoll(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == digits.size() && !digits.empty() && r >= 0) return fixed(r);
  }
  throw ConfigError("bad all-red policy '" + std::string(text) + "' (expected scaling or fixed:<R>)");
}

std::string AllRedPolicy::to_string() const {
  if (kind == AllRedKind::ScalingResidual) return "scaling";
  return "fixed:" + std::to_string(fixed_slots);
}

std::string to_string(ControlMode m) { return m == ControlMode::Fctl ? "fctl" : "actuated"; }

ControlMode parse_mode(std::string_view text) {
  if (text == "fctl") return ControlMode::Fctl;
  if (text == "actuated") return ControlMode::Actuated;
  throw ConfigError("bad mode '" + std::string(text) + "' (expected fctl or actuated)");
}

std::string to_string(ArrivalKind k) { return k == ArrivalKind::Poisson ? "poisson" : "bernoulli"; }

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  for (const char* key : required) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing required key '" + std::string(key) + "'");
  }
}

Rational rational_field(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_unsigned() || v.is_number_integer()) return Rational(v.get<std::int64_t>(), 1);
    if (v.is_number_float()) return Rational::parse(v.dump());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": expected a number or a fraction string");
}

std::int64_t int_field(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<std::int64_t>();
}

std::string string_field(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("syntax error at " + line_col(text, e.byte) + ": " + e.what());
  }

  check_keys(doc, "scenario",
             {"lanes", "phases", "cycle_lengths", "mode", "all_red_policy", "all_red_placement", "cycles_per_run",
              "warmup_cycles", "replications", "master_seed"},
             {"lanes", "phases", "cycle_lengths", "cycles_per_run"});

  ScenarioConfig cfg;
  if (!doc["lanes"].is_array()) throw ConfigError("lanes: expected an array");
  for (std::size_t i = 0; i < doc["lanes"].size(); ++i) {
    const auto& node = doc["lanes"][i];
    const std::string where = "lanes[" + std::to_string(i) + "]";
    check_keys(node, where, {"id", "arrivals", "beta"}, {"id", "arrivals", "beta"});
    LaneConfig lane;
    lane.id = static_cast<int>(int_field(node["id"], where + ".id"));
    check_keys(node["arrivals"], where + ".arrivals", {"kind", "mean"}, {"kind", "mean"});
    const auto kind = string_field(node["arrivals"]["kind"], where + ".arrivals.kind");
    if (kind == "poisson") {
      lane.arrivals.kind = ArrivalKind::Poisson;
    } else if (kind == "bernoulli") {
      lane.arrivals.kind = ArrivalKind::Bernoulli;
    } else {
      throw ConfigError(where + ".arrivals.kind: unknown distribution '" + kind + "'");
    }
    lane.arrivals.mean = rational_field(node["arrivals"]["mean"], where + ".arrivals.mean");
    lane.beta = rational_field(node["beta"], where + ".beta");
    cfg.lanes.push_back(lane);
  }

  std::set<int> ids;
  for (const auto& lane : cfg.lanes) ids.insert(lane.id);

  if (!doc["phases"].is_array()) throw ConfigError("phases: expected an array");
  for (std::size_t j = 0; j < doc["phases"].size(); ++j) {
    const auto& node = doc["phases"][j];
    const std::string where = "phases[" + std::to_string(j) + "]";
    check_keys(node, where, {"lanes"}, {"lanes"});
    if (!node["lanes"].is_array()) throw ConfigError(where + ".lanes: expected an array");
    PhaseConfig phase;
    for (const auto& id_node : node["lanes"]) {
      const auto id = static_cast<int>(int_field(id_node, where + ".lanes"));
      if (!ids.contains(id)) throw ConfigError(where + ": unknown lane id " + std::to_string(id));
      phase.lanes.push_back(id);
    }
    cfg.phases.push_back(std::move(phase));
  }

  if (!doc["cycle_lengths"].is_array()) throw ConfigError("cycle_lengths: expected an array");
  for (const auto& c : doc["cycle_lengths"]) cfg.cycle_lengths.push_back(int_field(c, "cycle_lengths"));

  cfg.cycles_per_run = int_field(doc["cycles_per_run"], "cycles_per_run");
  if (doc.contains("warmup_cycles")) cfg.warmup_cycles = int_field(doc["warmup_cycles"], "warmup_cycles");
  if (doc.contains("replications")) cfg.replications = static_cast<int>(int_field(doc["replications"], "replications"));
  if (doc.contains("master_seed")) {
    const auto& s = doc["master_seed"];
    if (!s.is_number_integer()) throw ConfigError("master_seed: expected an integer");
    cfg.master_seed = s.is_number_unsigned() ? s.get<std::uint64_t>() : static_cast<std::uint64_t>(s.get<std::int64_t>());
  }
  try {
    if (doc.contains("mode")) cfg.mode = parse_mode(string_field(doc["mode"], "mode"));
    if (doc.contains("all_red_policy")) {
      cfg.all_red_policy = AllRedPolicy::parse(string_field(doc["all_red_policy"], "all_red_policy"));
    }
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (doc.contains("all_red_placement")) {
    const auto p = string_field(doc["all_red_placement"], "all_red_placement");
    if (p == "end") {
      cfg.all_red_placement = AllRedPlacement::End;
    } else if (p == "split") {
      cfg.all_red_placement = AllRedPlacement::Split;
    } else {
      throw ConfigError("all_red_placement: expected end or split, got '" + p + "'");
    }
  }
  return cfg;
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  json doc;
  doc["lanes"] = json::array();
  for (const auto& lane : cfg.lanes) {
    doc["lanes"].push_back({{"id", lane.id},
                            {"arrivals", {{"kind", to_string(lane.arrivals.kind)}, {"mean", lane.arrivals.mean.to_string()}}},
                            {"beta", lane.beta.to_string()}});
  }
  doc["phases"] = json::array();
  for (const auto& phase : cfg.phases) doc["phases"].push_back({{"lanes", phase.lanes}});
  doc["cycle_lengths"] = cfg.cycle_lengths;
  doc["mode"] = to_string(cfg.mode);
  doc["all_red_policy"] = cfg.all_red_policy.to_string();
  doc["all_red_placement"] = cfg.all_red_placement == AllRedPlacement::End ? "end" : "split";
  doc["cycles_per_run"] = cfg.cycles_per_run;
  doc["warmup_cycles"] = cfg.warmup_cycles;
  doc["replications"] = cfg.replications;
  doc["master_seed"] = cfg.master_seed;
  return doc.dump(2) + "\n";
}

ValidatedScenario validate(const ScenarioConfig& input, Feasibility feasibility) {
  ScenarioConfig cfg = input;
  const auto n = static_cast<int>(cfg.lanes.size());
  if (n == 0) throw ConfigError("lanes: at least one lane is required");

  std::sort(cfg.lanes.begin(), cfg.lanes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (int k = 0; k < n; ++k) {
    const auto& lane = cfg.lanes[static_cast<std::size_t>(k)];
    const std::string where = "lane " + std::to_string(lane.id);
    if (k > 0 && cfg.lanes[static_cast<std::size_t>(k - 1)].id == lane.id) throw ConfigError(where + ": duplicate lane id");
    if (lane.id != k + 1) throw ConfigError(where + ": lane ids must be exactly 1.." + std::to_string(n));
    const Rational one{1, 1};
    if (lane.arrivals.kind == ArrivalKind::Bernoulli && lane.arrivals.mean > one) {
      throw ConfigError(where + ": Bernoulli mean must lie in [0, 1]");
    }
    if (lane.arrivals.mean == Rational{}) throw ConfigError(where + ": arrival mean must be positive");
    if (lane.arrivals.mean >= one) throw ConfigError(where + ": unstable: g cannot exceed λc within c");
    if (lane.beta == Rational{}) throw ConfigError(where + ": beta must be positive");
  }

  if (cfg.phases.empty()) throw ConfigError("phases: at least one phase is required");
  std::vector<int> membership(static_cast<std::size_t>(n), 0);
  for (std::size_t j = 0; j < cfg.phases.size(); ++j) {
    const auto& phase = cfg.phases[j];
    const std::string where = "phase " + std::to_string(j + 1);
    if (phase.lanes.empty()) throw ConfigError(where + ": phase must contain at least one lane");
    std::set<int> seen;
    for (int id : phase.lanes) {
      if (id < 1 || id > n) throw ConfigError(where + ": unknown lane id " + std::to_string(id));
      if (!seen.insert(id).second) throw ConfigError(where + ": lane " + std::to_string(id) + " listed twice");
      ++membership[static_cast<std::size_t>(id - 1)];
    }
  }

  ValidatedScenario out;
  for (int k = 0; k < n; ++k) {
    const int count = membership[static_cast<std::size_t>(k)];
    if (count == 0) throw ConfigError("lane " + std::to_string(k + 1) + " belongs to no phase");
    if (count > 1) {
      out.warnings_.push_back("lane " + std::to_string(k + 1) + " belongs to " + std::to_string(count) +
                              " phases and is served in each of them");
    }
  }

  if (cfg.cycle_lengths.empty()) throw ConfigError("cycle_lengths: at least one cycle length is required");
  for (std::size_t k = 0; k < cfg.cycle_lengths.size(); ++k) {
    if (cfg.cycle_lengths[k] <= 0) throw ConfigError("cycle_lengths: entries must be positive");
    if (k > 0 && cfg.cycle_lengths[k] <= cfg.cycle_lengths[k - 1]) {
      throw ConfigError("cycle_lengths: entries must be strictly increasing");
    }
  }
  if (cfg.cycles_per_run <= 0) throw ConfigError("cycles_per_run must be positive");
  if (cfg.warmup_cycles < 0) throw ConfigError("warmup_cycles must be nonnegative");
  if (cfg.warmup_cycles >= cfg.cycles_per_run) throw ConfigError("warmup_cycles must be smaller than cycles_per_run");
  if (cfg.replications < 2) throw ConfigError("replications: need >= 2 replications for confidence intervals");
  if (cfg.all_red_policy.kind == AllRedKind::Fixed && cfg.all_red_policy.fixed_slots < 0) {
    throw ConfigError("all_red_policy: fixed all-red time must be nonnegative");
  }

  for (auto c : cfg.cycle_lengths) {
    try {
      (void)allocate(cfg, c);
      out.feasible_.push_back(c);
    } catch (const InfeasibleCycle& e) {
      if (feasibility == Feasibility::Require) throw;
      out.infeasible_.push_back(e);
    }
  }

  out.cfg_ = std::make_shared<const ScenarioConfig>(std::move(cfg));
  return out;
}

}  // namespace sqrtgreen
