#include <algorithm>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "isaacs/error.hpp"
#include "isaacs/harness.hpp"
#include "isaacs/model.hpp"

namespace {

struct Overrides {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string method;
};

isaacs::ExperimentConfig resolve(const Overrides& o) {
    isaacs::ExperimentConfig c = isaacs::load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (!o.method.empty()) {
        const auto& names = isaacs::method_names();
        if (std::find(names.begin(), names.end(), o.method) == names.end()) {
            throw isaacs::Error(isaacs::ErrorKind::ConfigError, "--method: unknown method '" + o.method + "'");
        }
        c.method = o.method;
    }
    if (!o.out.empty()) c.output_dir = o.out;
    return c;
}

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory (overrides output_dir)");
    cmd->add_option("--seed", o.seed, "random seed (overrides seed)");
    cmd->add_option("--method", o.method, "method (overrides method)");
}

int report(const isaacs::RunManifest& m) {
    for (const auto& c : m.checks) {
        std::printf("%-32s %s  value=%.6g tol=%.3g\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.value, c.tolerance);
    }
    for (const auto& f : m.files) std::printf("wrote %s\n", f.c_str());
    return isaacs::manifest_exit_code(m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isaacs-lab: double-obstacle Isaacs / reflected BSDE experiments"};
    app.require_subcommand(1);
    Overrides run_opts, sweep_opts;
    CLI::App* run = app.add_subcommand("run", "run one experiment");
    add_common(run, run_opts);
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep (config needs a \"sweep\" block)");
    add_common(sweep, sweep_opts);
    CLI::App* models = app.add_subcommand("models", "list built-in models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (models->parsed()) {
            for (const auto& name : isaacs::builtin_model_names()) std::cout << name << '\n';
            return 0;
        }
        if (run->parsed()) {
            const auto c = resolve(run_opts);
            return report(isaacs::run_experiment(c, c.output_dir));
        }
        const auto c = resolve(sweep_opts);
        return report(isaacs::run_sweep(c, c.output_dir));
    } catch (const isaacs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return isaacs::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
