// projsq: run named projective-squeezing scenarios from a flat config file.
//
//   projsq run <scenario> [--config FILE] [--out DIR] [--seed N] [--dim N] [--svg]
//   projsq list
//
// Exit codes: 0 success, 1 usage/config error, 2 tolerance or runtime failure.
// PROJSQ_DIM / PROJSQ_SEED override config values; explicit flags win over both.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "projsq/config.hpp"
#include "projsq/scenarios.hpp"

namespace {

// Reads a non-negative integer env override; empty/absent yields fallback.
long long env_ll(const char* name, long long fallback, bool& bad) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return fallback;
    try {
        std::size_t used = 0;
        const long long v = std::stoll(raw, &used);
        if (used != std::string(raw).size() || v < 0) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        std::cerr << "projsq: invalid " << name << " value '" << raw << "'\n";
        bad = true;
        return fallback;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"projective-squeezing scenario runner"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "enumerate available scenarios");

    std::string scenario, config_path, out_dir = ".";
    long long seed_flag = -1;
    int dim_flag = 0;
    bool svg = false;
    auto* run = app.add_subcommand("run", "execute one scenario");
    run->add_option("scenario", scenario, "scenario name (see: projsq list)")
        ->required();
    run->add_option("--config", config_path, "flat key = value parameter file");
    run->add_option("--out", out_dir, "output directory (created if missing)");
    run->add_option("--seed", seed_flag, "RNG seed override");
    run->add_option("--dim", dim_flag, "Fock dimension override");
    run->add_flag("--svg", svg, "also write an SVG line chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (list->parsed()) {
        for (const auto& name : projsq::scenario_names()) std::cout << name << "\n";
        return 0;
    }

    const auto names = projsq::scenario_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end()) {
        std::cerr << "projsq: unknown scenario '" << scenario
                  << "'; run 'projsq list'\n";
        return 1;
    }

    projsq::ScenarioConfig cfg;
    cfg.name = scenario;
    cfg.output_dir = out_dir;
    cfg.svg = svg;
    try {
        if (!config_path.empty()) cfg.params = projsq::load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "projsq: " << e.what() << "\n";
        return 1;
    }

    bool bad_env = false;
    const long long env_dim = env_ll("PROJSQ_DIM", 0, bad_env);
    const long long env_seed = env_ll("PROJSQ_SEED", -1, bad_env);
    if (bad_env) return 1;
    cfg.dim_override = dim_flag > 0 ? dim_flag : static_cast<int>(env_dim);
    cfg.seed_override = seed_flag >= 0 ? seed_flag : env_seed;

    try {
        const projsq::ScenarioResult res = projsq::run_scenario(cfg);
        std::cout << "wrote " << res.csv_path << "\n";
        for (const auto& p : res.svg_paths) std::cout << "wrote " << p << "\n";
        if (!res.ok) {
            std::cerr << "projsq: FAILED: " << res.message << "\n";
            return 2;
        }
        std::cout << "ok\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "projsq: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "projsq: " << e.what() << "\n";
        return 2;
    }
}
