#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "projsq/config.hpp"

namespace projsq {

// A named experiment run. params comes from a flat key = value config file
// and may override any scenario knob (grids, tolerances, dim, seed, shots).
// dim_override / seed_override, when set, win over both params and the
// scenario default; they back the --dim/--seed CLI flags and env vars.
struct ScenarioConfig {
    std::string name;
    ConfigMap params;
    std::string output_dir = ".";
    int dim_override = 0;
    long long seed_override = -1;
    bool svg = false;
};

struct ScenarioResult {
    bool ok = true;
    std::string message;  // first failed gate, empty on success
    std::string csv_path;
    std::vector<std::string> svg_paths;
};

// The run names accepted by run_scenario, in listing order.
std::vector<std::string> scenario_names();

// Smallest basis size a scenario accepts (each row is re-verified at twice
// the working dim, so the effective cost is higher than this floor).
int scenario_min_dim(const std::string& name);

// Executes one scenario: writes <output_dir>/<name>.csv (always) and
// <output_dir>/<name>.svg (when cfg.svg), evaluating every per-row gate and
// the row-wise truncation diagnostic. Throws InvalidArgument for an unknown
// name, bad params, or dim below the scenario minimum; numerical gates do
// not throw, they return ok = false with the first failure message.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace projsq
