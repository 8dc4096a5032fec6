#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "isaacs/model.hpp"

namespace isaacs {

struct GridConfig {
    std::optional<double> x_min;  // default: model domain
    std::optional<double> x_max;
    std::size_t nx = 100;
    std::optional<std::size_t> nt;  // required when auto_cfl is false
    bool auto_cfl = true;
};

/// One experiment. JSON schema (all keys but "model" and "method" optional):
///
///   { "model": "risk_sensitive_1d", "params": {"sigma": 0.5},
///     "grid": {"x_min": -3, "x_max": 3, "nx": 100, "nt": 400, "auto_cfl": false},
///     "control_grid": {"A": 3, "B": 3}, "side": "lower" | "upper" | "both",
///     "method": "pde", "x0": 0.0, "seed": 1, "n_paths": 10000,
///     "penalty": 100, "approx_p": 12, "output_dir": "out",
///     "sweep": {"axis": "nx", "values": [50, 100, 200]} }
struct ExperimentConfig {
    std::string model;
    ModelParams params;
    GridConfig grid;
    ControlGridSizes control_grid;
    std::string side = "lower";
    std::string method;
    std::optional<double> x0;
    std::uint64_t seed = 1;
    std::size_t n_paths = 10000;
    double penalty = 100.0;
    int approx_p = 12;
    std::string output_dir = "out";
    std::string sweep_axis;
    std::vector<double> sweep_values;
};

const std::vector<std::string>& method_names();

/// Throws Error(ConfigError) naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& file);
std::string config_json(const ExperimentConfig& config);

struct CheckResult {
    std::string name;
    bool passed = true;
    double value = 0.0;
    double tolerance = 0.0;
};

struct RunManifest {
    std::string config;  // JSON echo
    std::string version;
    double wall_seconds = 0.0;
    std::vector<std::string> files;  // relative to the output directory
    std::vector<CheckResult> checks;

    bool all_passed() const;
};

std::string manifest_json(const RunManifest& manifest);

/// Dispatches on config.method, writes artifacts and manifest.json into
/// `out_dir` (created if missing).
RunManifest run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// One run per value of config.sweep_axis (nx, control, lambda, p); writes
/// sweep.csv with columns axis_value, result, gap_to_finest.
RunManifest run_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Process exit status for a finished run: 0 when every check passed, 4 otherwise.
int manifest_exit_code(const RunManifest& manifest);

}  // namespace isaacs
