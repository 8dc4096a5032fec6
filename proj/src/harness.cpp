#include "isaacs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "isaacs/csv.hpp"
#include "isaacs/dynamics.hpp"
#include "isaacs/dynkin.hpp"
#include "isaacs/pde.hpp"
#include "isaacs/rbsde.hpp"
#include "isaacs/transforms.hpp"
#include "json.hpp"

#ifndef ISAACS_LAB_VERSION
#define ISAACS_LAB_VERSION "dev"
#endif

namespace isaacs {

using nlohmann::json;

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{"pde",     "pde-transform",     "rbsde-chain", "penalized",
                                                "dynkin",  "risk-sensitive-mc", "crosscheck",  "approx-chain"};
    return names;
}

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::ConfigError, "config field '" + field + "': " + what);
}

template <typename T>
T read_field(const json& j, const std::string& key, const std::string& path) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(path, e.what());
    }
}

void check_known(const json& j, const std::vector<std::string>& keys, const std::string& where) {
    for (const auto& item : j.items()) {
        if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
            config_error(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
        }
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
    check_known(j, {"model", "params", "grid", "control_grid", "side", "method", "x0", "seed", "n_paths", "penalty",
                    "approx_p", "output_dir", "sweep"},
                "");
    ExperimentConfig c;
    if (!j.contains("model")) config_error("model", "required");
    c.model = read_field<std::string>(j, "model", "model");
    const auto names = builtin_model_names();
    if (std::find(names.begin(), names.end(), c.model) == names.end())
        throw Error(ErrorKind::NotFound, "config field 'model': no built-in model named '" + c.model + "'");
    if (j.contains("params")) {
        if (!j["params"].is_object()) config_error("params", "must be an object");
        for (const auto& item : j["params"].items()) {
            c.params[item.key()] = read_field<double>(j["params"], item.key(), "params." + item.key());
        }
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object()) config_error("grid", "must be an object");
        check_known(g, {"x_min", "x_max", "nx", "nt", "auto_cfl"}, "grid");
        if (g.contains("x_min")) c.grid.x_min = read_field<double>(g, "x_min", "grid.x_min");
        if (g.contains("x_max")) c.grid.x_max = read_field<double>(g, "x_max", "grid.x_max");
        if (g.contains("nx")) c.grid.nx = read_field<std::size_t>(g, "nx", "grid.nx");
        if (g.contains("nt")) {
            c.grid.nt = read_field<std::size_t>(g, "nt", "grid.nt");
            c.grid.auto_cfl = false;
        }
        if (g.contains("auto_cfl")) c.grid.auto_cfl = read_field<bool>(g, "auto_cfl", "grid.auto_cfl");
        if (c.grid.nx < 4) config_error("grid.nx", "must be at least 4");
        if (!c.grid.auto_cfl && !c.grid.nt) config_error("grid.nt", "required when auto_cfl is false");
        if (c.grid.nt && *c.grid.nt < 1) config_error("grid.nt", "must be at least 1");
    }
    if (j.contains("control_grid")) {
        const json& g = j["control_grid"];
        check_known(g, {"A", "B"}, "control_grid");
        if (g.contains("A")) c.control_grid.a = read_field<std::size_t>(g, "A", "control_grid.A");
        if (g.contains("B")) c.control_grid.b = read_field<std::size_t>(g, "B", "control_grid.B");
    }
    if (j.contains("side")) c.side = read_field<std::string>(j, "side", "side");
    if (c.side != "lower" && c.side != "upper" && c.side != "both") config_error("side", "must be lower, upper or both");
    if (!j.contains("method")) config_error("method", "required");
    c.method = read_field<std::string>(j, "method", "method");
    if (std::find(method_names().begin(), method_names().end(), c.method) == method_names().end()) {
        config_error("method", "unknown method '" + c.method + "'");
    }
    if (j.contains("x0")) c.x0 = read_field<double>(j, "x0", "x0");
    if (j.contains("seed")) c.seed = read_field<std::uint64_t>(j, "seed", "seed");
    if (j.contains("n_paths")) c.n_paths = read_field<std::size_t>(j, "n_paths", "n_paths");
    if (c.n_paths < 2) config_error("n_paths", "must be at least 2");
    if (j.contains("penalty")) c.penalty = read_field<double>(j, "penalty", "penalty");
    if (!(c.penalty >= 0.0)) config_error("penalty", "must be nonnegative");
    if (j.contains("approx_p")) c.approx_p = read_field<int>(j, "approx_p", "approx_p");
    if (c.approx_p < 2) config_error("approx_p", "must be at least 2");
    if (j.contains("output_dir")) c.output_dir = read_field<std::string>(j, "output_dir", "output_dir");
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        check_known(s, {"axis", "values"}, "sweep");
        c.sweep_axis = read_field<std::string>(s, "axis", "sweep.axis");
        c.sweep_values = read_field<std::vector<double>>(s, "values", "sweep.values");
        if (c.sweep_axis != "nx" && c.sweep_axis != "control" && c.sweep_axis != "lambda" && c.sweep_axis != "p") {
            config_error("sweep.axis", "must be nx, control, lambda or p");
        }
        if (c.sweep_values.empty()) config_error("sweep.values", "must be nonempty");
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot read config file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_json(const ExperimentConfig& c) {
    json j;
    j["model"] = c.model;
    j["params"] = json::object();
    for (const auto& [k, v] : c.params) j["params"][k] = v;
    json g;
    if (c.grid.x_min) g["x_min"] = *c.grid.x_min;
    if (c.grid.x_max) g["x_max"] = *c.grid.x_max;
    g["nx"] = c.grid.nx;
    if (c.grid.nt) g["nt"] = *c.grid.nt;
    g["auto_cfl"] = c.grid.auto_cfl;
    j["grid"] = g;
    j["control_grid"] = {{"A", c.control_grid.a}, {"B", c.control_grid.b}};
    j["side"] = c.side;
    j["method"] = c.method;
    if (c.x0) j["x0"] = *c.x0;
    j["seed"] = c.seed;
    j["n_paths"] = c.n_paths;
    j["penalty"] = c.penalty;
    j["approx_p"] = c.approx_p;
    j["output_dir"] = c.output_dir;
    if (!c.sweep_axis.empty()) j["sweep"] = {{"axis", c.sweep_axis}, {"values", c.sweep_values}};
    return j.dump(2);
}

bool RunManifest::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string manifest_json(const RunManifest& m) {
    json j;
    j["config"] = json::parse(m.config);
    j["version"] = m.version;
    j["wall_seconds"] = m.wall_seconds;
    j["files"] = m.files;
    json checks = json::array();
    for (const auto& c : m.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}});
    }
    j["checks"] = checks;
    j["all_passed"] = m.all_passed();
    return j.dump(2);
}

int manifest_exit_code(const RunManifest& m) { return m.all_passed() ? 0 : exit_code(ErrorKind::CheckFailure); }

namespace {

struct Setup {
    GameModel model;
    SpaceTimeGrid grid;
    double x0 = 0.0;
};

Setup make_setup(const ExperimentConfig& c, bool match_transform) {
    Setup s;
    s.model = builtin_model(c.model, c.params, c.control_grid);
    validate_model(s.model, default_probe(s.model)).throw_if_failed();
    const double x_min = c.grid.x_min.value_or(s.model.domain.lo);
    const double x_max = c.grid.x_max.value_or(s.model.domain.hi);
    if (c.grid.auto_cfl) {
        s.grid = auto_cfl_grid(s.model, x_min, x_max, c.grid.nx);
        if (match_transform) {
            const SpaceTimeGrid probe = SpaceTimeGrid::make(x_min, x_max, c.grid.nx, 1, s.model.horizon);
            const TransformedModel tm = transform_data(s.model, probe);
            const SpaceTimeGrid other = auto_cfl_grid(tm.model, x_min, x_max, c.grid.nx);
            s.grid.nt = std::max(s.grid.nt, other.nt);
        }
        if (c.method == "penalized") {
            double lambda = c.penalty;
            if (c.sweep_axis == "lambda")
                for (double v : c.sweep_values) lambda = std::max(lambda, v);
            s.grid.nt = std::max(s.grid.nt, static_cast<std::size_t>(std::ceil(lambda * s.model.horizon)));
        }
    } else {
        s.grid = SpaceTimeGrid::make(x_min, x_max, c.grid.nx, *c.grid.nt, s.model.horizon);
    }
    s.x0 = c.x0.value_or(s.model.x0);
    return s;
}

std::vector<Side> sides_of(const ExperimentConfig& c) {
    if (c.side == "both") return {Side::Lower, Side::Upper};
    return {c.side == "upper" ? Side::Upper : Side::Lower};
}

double interpolate_level(const LevelField<double>& v, const SpaceTimeGrid& grid, std::size_t level, double x) {
    const double s = std::clamp((x - grid.x_min) / grid.dx(), 0.0, static_cast<double>(grid.nx));
    const auto j = std::min(static_cast<std::size_t>(std::floor(s)), grid.nx - 1);
    const double w = s - static_cast<double>(j);
    if (w == 0.0) return v(level, j);
    return (1.0 - w) * v(level, j) + w * v(level, j + 1);
}

// Largest amount by which any node leaves [lo, hi], plus the terminal mismatch.
double sandwich_excess(const LevelField<double>& v, const LevelField<double>& lo, const LevelField<double>& hi) {
    double worst = 0.0;
    for (std::size_t k = 0; k < v.raw().size(); ++k) {
        worst = std::max({worst, lo.raw()[k] - v.raw()[k], v.raw()[k] - hi.raw()[k]});
    }
    return worst;
}

double terminal_mismatch(const LevelField<double>& v, const std::vector<double>& g, std::size_t nt) {
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) worst = std::max(worst, std::abs(v(nt, j) - g[j]));
    return worst;
}

class Run {
public:
    Run(const ExperimentConfig& c, std::filesystem::path out) : cfg_(c), out_(std::move(out)) {
        std::filesystem::create_directories(out_);
        manifest_.config = config_json(c);
        manifest_.version = ISAACS_LAB_VERSION;
    }

    std::filesystem::path file(const std::string& name) {
        manifest_.files.push_back(name);
        return out_ / name;
    }
    void check(const std::string& name, double value, double tolerance) {
        manifest_.checks.push_back({name, std::isfinite(value) && value <= tolerance, value, tolerance});
    }
    void write_json(const std::string& name, const json& j) {
        std::ofstream f(file(name), std::ios::binary);
        f << j.dump(2) << '\n';
    }
    RunManifest finish(double seconds) {
        manifest_.wall_seconds = seconds;
        std::ofstream f(out_ / "manifest.json", std::ios::binary);
        f << manifest_json(manifest_) << '\n';
        return manifest_;
    }

    const ExperimentConfig& cfg() const { return cfg_; }

private:
    ExperimentConfig cfg_;
    std::filesystem::path out_;
    RunManifest manifest_;
};

void check_field(Run& run, const std::string& tag, const LevelField<double>& v, const BarrierData& data,
                 std::size_t nt) {
    run.check("sandwich_" + tag, sandwich_excess(v, data.lower, data.upper), 0.0);
    run.check("terminal_" + tag, terminal_mismatch(v, data.terminal, nt), 0.0);
}

void method_pde(Run& run, bool via_transform) {
    const Setup s = make_setup(run.cfg(), via_transform);
    const BarrierData data = barrier_data(s.model, s.grid);
    json report;
    report["nt"] = s.grid.nt;
    report["dt"] = s.grid.dt();
    std::vector<ValueField> fields;
    for (Side side : sides_of(run.cfg())) {
        const std::string tag = to_string(side);
        ValueField f = via_transform ? solve_via_transform(s.model, s.grid, side)
                                     : solve_double_obstacle(s.model, s.grid, side);
        const std::string stem = via_transform ? "value_transform_" + tag : "value_" + tag;
        write_value_csv(f, run.file(stem + ".csv"));
        write_value_matrix(f, run.file(stem + ".dat"));
        const double residual = residual_check(f, s.model, s.grid, side);
        report[tag] = {{"u0", f.interpolate(0, s.x0)}, {"residual", residual}};
        check_field(run, tag, f.values, data, s.grid.nt);
        run.check("residual_finite_" + tag, std::isfinite(residual) ? 0.0 : INFINITY, 0.0);
        if (via_transform) {
            const ValueField direct = solve_double_obstacle(s.model, s.grid, side);
            double gap = 0.0;
            for (std::size_t k = 0; k < f.values.raw().size(); ++k) {
                gap = std::max(gap, std::abs(f.values.raw()[k] - direct.values.raw()[k]));
            }
            report[tag]["max_gap_to_direct"] = gap;
            run.check("transform_vs_direct_" + tag, gap, 5e-2);
        }
        fields.push_back(std::move(f));
    }
    if (fields.size() == 2) {
        double worst = -INFINITY;
        for (std::size_t k = 0; k < fields[0].values.raw().size(); ++k) {
            worst = std::max(worst, fields[0].values.raw()[k] - fields[1].values.raw()[k]);
        }
        run.check("lower_le_upper", worst, 1e-8);
    }
    run.write_json("report.json", report);
}

void method_rbsde(Run& run, bool penalized) {
    const Setup s = make_setup(run.cfg(), false);
    const ValueField pde = solve_double_obstacle(s.model, s.grid, Side::Lower);
    const MarkovChain chain = build_markov_chain(s.model, s.grid);
    const ChainPolicy policy = pde.saddle_policy();
    const BarrierData data = barrier_data(s.model, s.grid);
    const RBSDESolution sol = solve_rbsde_chain(chain, policy, driver_from_model(s.model), data);
    json report;
    report["y0"] = interpolate_level(sol.y, s.grid, 0, s.x0);
    report["pde_u0"] = pde.interpolate(0, s.x0);
    if (!penalized) {
        write_rbsde_csv(sol, run.file("rbsde.csv"));
        check_field(run, "rbsde", sol.y, data, s.grid.nt);
        const SkorokhodResiduals r = skorokhod_residuals(sol);
        report["skorokhod_lower"] = r.lower;
        report["skorokhod_upper"] = r.upper;
        run.check("skorokhod", std::max(r.lower, r.upper), 1e-12);
        run.check("rbsde_vs_pde", std::abs(report["y0"].get<double>() - report["pde_u0"].get<double>()), 5e-2);
    } else {
        const double lambda = run.cfg().penalty;
        const RBSDESolution pen = solve_penalized(chain, policy, driver_from_model(s.model), data, lambda);
        write_rbsde_csv(pen, run.file("penalized.csv"));
        double dist = 0.0;
        for (std::size_t k = 0; k < pen.y.raw().size(); ++k) dist = std::max(dist, std::abs(pen.y.raw()[k] - sol.y.raw()[k]));
        const SkorokhodResiduals r = skorokhod_residuals(pen);
        report["lambda"] = lambda;
        report["penalized_y0"] = interpolate_level(pen.y, s.grid, 0, s.x0);
        report["distance_to_reflected"] = dist;
        report["skorokhod_lower"] = r.lower;
        report["skorokhod_upper"] = r.upper;
        run.check("penalized_finite", std::isfinite(dist) ? 0.0 : INFINITY, 0.0);
    }
    run.write_json("report.json", report);
}

PayoffMode payoff_mode(const GameModel& m) {
    return m.form == GeneratorForm::RiskSensitive ? PayoffMode::Exponential : PayoffMode::Additive;
}

void method_dynkin(Run& run) {
    const Setup s = make_setup(run.cfg(), false);
    const ValueField pde = solve_double_obstacle(s.model, s.grid, Side::Lower);
    const MarkovChain chain = build_markov_chain(s.model, s.grid);
    const DynkinData data = dynkin_data(s.model, s.grid, pde.saddle_policy());
    const DynkinValue v = dynkin_value(chain, pde.saddle_policy(), data, payoff_mode(s.model));
    write_dynkin_csv(v, run.file("dynkin.csv"));
    const double v0 = interpolate_level(v.value, s.grid, 0, s.x0);
    const double u0 = pde.interpolate(0, s.x0);
    run.check("sandwich_dynkin", sandwich_excess(v.value, data.lower, data.upper), 0.0);
    run.check("dynkin_vs_pde", std::abs(v0 - u0), 5e-2);
    run.write_json("report.json", {{"dynkin_v0", v0}, {"pde_u0", u0}});
}

void method_mc(Run& run) {
    const Setup s = make_setup(run.cfg(), false);
    if (s.model.form != GeneratorForm::RiskSensitive) {
        throw Error(ErrorKind::ConfigError, "config field 'method': risk-sensitive-mc needs a risk-sensitive model");
    }
    const ValueField pde = solve_double_obstacle(s.model, s.grid, Side::Lower);
    const MarkovChain chain = build_markov_chain(s.model, s.grid);
    const ChainPolicy policy = pde.saddle_policy();
    const DynkinValue v = dynkin_value(chain, policy, dynkin_data(s.model, s.grid, policy), PayoffMode::Exponential);
    const ExponentialIdentityReport r = verify_exponential_identity(s.model, policy, v.sigma_rule, v.tau_rule, chain,
                                                                    s.x0, run.cfg().n_paths, run.cfg().seed);
    std::ofstream(run.file("mc.json"), std::ios::binary) << exponential_identity_json(r) << '\n';
    run.check("exponential_identity", std::abs(r.gap), r.tolerance);
}

void method_crosscheck(Run& run) {
    const Setup s = make_setup(run.cfg(), true);
    const ValueField pde = solve_double_obstacle(s.model, s.grid, Side::Lower);
    const ValueField tr = solve_via_transform(s.model, s.grid, Side::Lower);
    const MarkovChain chain = build_markov_chain(s.model, s.grid);
    const ChainPolicy policy = pde.saddle_policy();
    const BarrierData data = barrier_data(s.model, s.grid);
    const RBSDESolution sol = solve_rbsde_chain(chain, policy, driver_from_model(s.model), data);

    struct Row {
        std::string method;
        double value;
        double tolerance;
    };
    std::vector<Row> rows;
    rows.push_back({"pde", pde.interpolate(0, s.x0), 0.0});
    rows.push_back({"pde-transform", tr.interpolate(0, s.x0), 5e-2});
    rows.push_back({"rbsde-chain", interpolate_level(sol.y, s.grid, 0, s.x0), 5e-2});
    if (s.model.form != GeneratorForm::General) {
        const DynkinData dd = dynkin_data(s.model, s.grid, policy);
        const DynkinValue v = dynkin_value(chain, policy, dd, payoff_mode(s.model));
        rows.push_back({"dynkin", interpolate_level(v.value, s.grid, 0, s.x0), 5e-2});
        if (s.model.form == GeneratorForm::RiskSensitive) {
            const ExponentialIdentityReport r = verify_exponential_identity(
                s.model, policy, v.sigma_rule, v.tau_rule, chain, s.x0, run.cfg().n_paths, run.cfg().seed);
            rows.push_back({"mc", r.ln_gamma_mc, r.tolerance + 5e-2});
        }
    }
    CsvWriter csv(run.file("crosscheck.csv"), {"method", "value", "gap_to_pde", "tolerance", "passed"});
    for (const Row& r : rows) {
        const double gap = std::abs(r.value - rows[0].value);
        const bool ok = gap <= r.tolerance;
        csv.field(std::string_view(r.method)).field(r.value).field(gap).field(r.tolerance);
        csv.field(std::string_view(ok ? "true" : "false")).end_row();
        if (r.method != "pde") run.check("gap_" + r.method, gap, r.tolerance);
    }
    CsvWriter pairs(run.file("crosscheck_pairs.csv"), {"method_a", "method_b", "gap"});
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
            pairs.field(std::string_view(rows[a].method)).field(std::string_view(rows[b].method));
            pairs.field(std::abs(rows[a].value - rows[b].value)).end_row();
        }
    }
}

ApproximationChainResult approx_chain(const Setup& s, int p_max, std::uint64_t seed) {
    const ValueField pde = solve_double_obstacle(s.model, s.grid, Side::Lower);
    const TransformedModel tm = transform_data(s.model, s.grid);
    const MarkovChain chain = build_markov_chain(tm.model, s.grid);
    return solve_approximation_chain(tm, chain, pde.saddle_policy(), p_max, seed);
}

void method_approx(Run& run) {
    const Setup s = make_setup(run.cfg(), false);
    const int p_max = run.cfg().approx_p;
    const ApproximationChainResult r = approx_chain(s, p_max, run.cfg().seed);
    CsvWriter csv(run.file("approx_chain.csv"), {"p", "eps", "upper_y0", "lower_y0", "upper_step", "lower_step"});
    for (int p = 1; p <= p_max; ++p) {
        const auto k = static_cast<std::size_t>(p - 1);
        csv.field(static_cast<long long>(p)).field(r.schedule.eps[static_cast<std::size_t>(p)]);
        csv.field(interpolate_level(r.upper[k], s.grid, 0, s.x0)).field(interpolate_level(r.lower[k], s.grid, 0, s.x0));
        csv.field(k < r.upper_step.size() ? r.upper_step[k] : NAN).field(k < r.lower_step.size() ? r.lower_step[k] : NAN);
        csv.end_row();
    }
    run.check("upper_chain_nonincreasing", r.upper_increase, 1e-12);
    run.check("lower_chain_nondecreasing", r.lower_decrease, 1e-12);
    run.check("upper_dominates_lower", -r.sandwich_gap, 1e-12);
    if (p_max >= 13) {
        run.check("upper_step_p12", r.upper_step[11], 1e-3);
        run.check("lower_step_p12", r.lower_step[11], 1e-3);
    }
}

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    Run run(config, out_dir);
    const std::string& m = config.method;
    if (m == "pde") {
        method_pde(run, false);
    } else if (m == "pde-transform") {
        method_pde(run, true);
    } else if (m == "rbsde-chain") {
        method_rbsde(run, false);
    } else if (m == "penalized") {
        method_rbsde(run, true);
    } else if (m == "dynkin") {
        method_dynkin(run);
    } else if (m == "risk-sensitive-mc") {
        method_mc(run);
    } else if (m == "crosscheck") {
        method_crosscheck(run);
    } else if (m == "approx-chain") {
        method_approx(run);
    } else {
        throw Error(ErrorKind::ConfigError, "config field 'method': unknown method '" + m + "'");
    }
    return run.finish(elapsed(start));
}

RunManifest run_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    if (config.sweep_axis.empty()) throw Error(ErrorKind::ConfigError, "config field 'sweep': required for sweep");
    const auto start = std::chrono::steady_clock::now();
    Run run(config, out_dir);
    const std::string& axis = config.sweep_axis;
    std::vector<double> values = config.sweep_values;
    std::vector<double> results;

    if (axis == "nx" || axis == "control") {
        for (double v : values) {
            ExperimentConfig c = config;
            const auto k = static_cast<std::size_t>(std::llround(v));
            if (axis == "nx") {
                c.grid.nx = k;
            } else {
                c.control_grid = {k, k};
            }
            const Setup s = make_setup(c, false);
            const Side side = c.side == "upper" ? Side::Upper : Side::Lower;
            results.push_back(solve_double_obstacle(s.model, s.grid, side).interpolate(0, s.x0));
        }
    } else if (axis == "lambda") {
        const Setup s = make_setup(config, false);
        const ValueField pde = solve_double_obstacle(s.model, s.grid, Side::Lower);
        const MarkovChain chain = build_markov_chain(s.model, s.grid);
        const BarrierData data = barrier_data(s.model, s.grid);
        const DriverFn driver = driver_from_model(s.model);
        const RBSDESolution refl = solve_rbsde_chain(chain, pde.saddle_policy(), driver, data);
        for (double lambda : values) {
            const RBSDESolution pen = solve_penalized(chain, pde.saddle_policy(), driver, data, lambda);
            double dist = 0.0;
            for (std::size_t k = 0; k < pen.y.raw().size(); ++k) dist = std::max(dist, std::abs(pen.y.raw()[k] - refl.y.raw()[k]));
            results.push_back(dist);
        }
    } else {
        int p_max = 2;
        for (double v : values) p_max = std::max(p_max, static_cast<int>(std::llround(v)) + 1);
        const ApproximationChainResult r = approx_chain(make_setup(config, false), p_max, config.seed);
        for (double v : values) {
            const auto p = static_cast<std::size_t>(std::max<long long>(1, std::llround(v)));
            results.push_back(r.upper_step[p - 1]);
        }
    }

    CsvWriter csv(run.file("sweep.csv"), {"axis_value", "result", "gap_to_finest"});
    std::vector<double> gaps;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double gap = std::abs(results[k] - results.back());
        gaps.push_back(gap);
        csv.field(values[k]).field(results[k]).field(gap).end_row();
    }
    // Error decay: results themselves for lambda / p, gap to the finest run for nx.
    const std::vector<double>& decay = (axis == "lambda" || axis == "p") ? results : gaps;
    const std::size_t count = (axis == "lambda" || axis == "p") ? decay.size() : decay.size() - 1;
    double worst = 0.0;
    for (std::size_t k = 1; k < count; ++k) worst = std::max(worst, decay[k] - decay[k - 1]);
    if (axis != "control") run.check("monotone_decay_" + axis, worst, 0.0);
    return run.finish(elapsed(start));
}

}  // namespace isaacs
