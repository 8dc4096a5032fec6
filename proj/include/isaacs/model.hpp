#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isaacs/error.hpp"

namespace isaacs {

using Point = std::span<const double>;

/// Drift b(t, x, a, b) into `out` (length n); diffusion sigma(t, x, a, b) into
/// `out` as a row-major n x d matrix.
using VectorCoefficient = std::function<void(double t, Point x, double alpha, double beta, std::span<double> out)>;
/// F(t, x, y, z, a, b), z a row vector of length d.
using GeneratorFn = std::function<double(double t, Point x, double y, Point z, double alpha, double beta)>;
using TerminalFn = std::function<double(Point x)>;
using ObstacleFn = std::function<double(double t, Point x)>;
using RunningCostFn = std::function<double(double t, Point x, double alpha, double beta)>;

/// Structural form of the generator. Dynkin and Monte Carlo layers need the
/// running cost phi separately.
enum class GeneratorForm {
    General,        // opaque F
    RunningCost,    // F = phi(t, x, a, b)
    RiskSensitive,  // F = phi(t, x, a, b) + |z|^2 / 2
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct GameModel {
    std::string name;
    double horizon = 1.0;
    std::size_t state_dim = 1;
    std::size_t noise_dim = 1;
    std::vector<double> control_grid_a{0.0};
    std::vector<double> control_grid_b{0.0};

    VectorCoefficient drift;
    VectorCoefficient diffusion;
    GeneratorFn generator;
    TerminalFn terminal;
    ObstacleFn lower_obstacle;
    ObstacleFn upper_obstacle;

    GeneratorForm form = GeneratorForm::General;
    RunningCostFn running_cost;  // set unless form == General

    double quad_growth_c = 1.0;  // |F| <= C (1 + |z|^2); also the exponential-transform constant
    double lipschitz_cl = 1.0;   // Lipschitz constant of b, sigma in x
    double derivative_c = 1.0;   // |F + F_x + F_z| <= C3 (1 + |z|^2)

    Interval domain{-1.0, 1.0};  // truncated spatial domain (first coordinate)
    double x0 = 0.0;             // default start point for cross-checks
    bool time_homogeneous = true;  // b, sigma independent of t

    // Scalar conveniences for n = d = 1.
    double drift_at(double t, double x, double alpha, double beta) const;
    double diffusion_at(double t, double x, double alpha, double beta) const;
    double generator_at(double t, double x, double y, double z, double alpha, double beta) const;
    double terminal_at(double x) const;
    double lower_at(double t, double x) const;
    double upper_at(double t, double x) const;
    double running_at(double t, double x, double alpha, double beta) const;
};

/// One-dimensional coefficient set; `to_model` wraps it into a GameModel.
struct ScalarCoefficients {
    std::function<double(double t, double x, double alpha, double beta)> drift;
    std::function<double(double t, double x, double alpha, double beta)> diffusion;
    std::function<double(double t, double x, double y, double z, double alpha, double beta)> generator;
    std::function<double(double x)> terminal;
    std::function<double(double t, double x)> lower_obstacle;
    std::function<double(double t, double x)> upper_obstacle;
    std::function<double(double t, double x, double alpha, double beta)> running_cost;  // optional
    GeneratorForm form = GeneratorForm::General;
};

/// Builds a GameModel from scalar coefficients. For RunningCost and
/// RiskSensitive forms the generator is synthesised from `running_cost` when
/// `generator` is empty.
GameModel to_model(std::string name, ScalarCoefficients coefficients, double horizon,
                   std::vector<double> control_grid_a, std::vector<double> control_grid_b);

/// Sampling plan for validate_model: a deterministic tensor grid plus seeded
/// random points.
struct ProbeSpec {
    Interval x_range{-1.0, 1.0};
    std::size_t x_points = 21;
    std::size_t t_points = 5;
    double z_max = 5.0;
    std::size_t z_points = 11;
    Interval y_range{-2.0, 2.0};
    std::size_t y_points = 5;
    std::size_t random_samples = 200;
    std::uint64_t seed = 7;
    double fd_step = 1e-5;
    double y_slope_epsilon = 0.1;  // epsilon used when measuring C_eps in dF/dy <= C_eps + eps |z|^2
};

ProbeSpec default_probe(const GameModel& model);

struct AssumptionCheck {
    std::string assumption;  // e.g. "obstacle order h < h'"
    bool passed = true;
    double measured = 0.0;   // worst ratio or constant observed
    double declared = 0.0;   // threshold it was compared with (0 when report-only)
    std::vector<double> witness;  // (t, x..., [y, z, a, b]) at the worst probe
    std::optional<ErrorKind> violation;
};

struct ModelValidationReport {
    std::vector<AssumptionCheck> checks;
    std::size_t probe_count = 0;
    double empirical_lipschitz = 0.0;
    double empirical_growth = 0.0;
    double terminal_bound = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double derivative_constant = 0.0;
    double y_slope_c_eps = 0.0;

    bool ok() const;
    /// First failing check, if any.
    const AssumptionCheck* first_failure() const;
    /// Throws Error(violation) naming the assumption and witness point.
    void throw_if_failed() const;
};

ModelValidationReport validate_model(const GameModel& model, const ProbeSpec& probe);

/// Parameter overrides for built-in models (e.g. {"sigma", 0.8}).
using ModelParams = std::map<std::string, double>;

struct ControlGridSizes {
    std::size_t a = 0;  // 0 keeps the model default
    std::size_t b = 0;
};

std::vector<std::string> builtin_model_names();

/// Registry of every built-in model at its default parameters.
std::map<std::string, GameModel> builtin_models();

/// Throws Error(NotFound) for unknown names, Error(ConfigError) for unknown
/// parameter keys.
GameModel builtin_model(const std::string& name, const ModelParams& params = {},
                        ControlGridSizes sizes = {});

/// Evenly spaced control grid; a single point sits at the midpoint.
std::vector<double> control_linspace(double lo, double hi, std::size_t count);

}  // namespace isaacs
