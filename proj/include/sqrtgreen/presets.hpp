#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sqrtgreen/scenario.hpp"

namespace sqrtgreen {

// Four-leg intersection presets: ex1a, ex1b (one lane per phase) and ex2a,
// ex2b (opposing lanes share a phase). Desk-scale defaults: 10^5 cycles per
// run, 10^3 warm-up cycles, 4 replications, cycle lengths 110, 220, 440, 880.
ScenarioConfig preset(std::string_view name);

std::vector<std::string> preset_names();

// One-line description for `presets list`.
std::string preset_description(std::string_view name);

}  // namespace sqrtgreen
