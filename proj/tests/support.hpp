#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "isaacs/model.hpp"

namespace isaacs::fixtures {

// Constant drift and volatility with no controls, F(t, x, y, z) supplied by the caller.
inline GameModel constant_model(double drift, double sigma,
                                std::function<double(double, double, double, double)> generator,
                                std::function<double(double)> terminal, std::function<double(double, double)> lower,
                                std::function<double(double, double)> upper, double horizon = 1.0,
                                Interval domain = {-1.0, 1.0}) {
    ScalarCoefficients c;
    c.drift = [drift](double, double, double, double) { return drift; };
    c.diffusion = [sigma](double, double, double, double) { return sigma; };
    c.generator = [g = std::move(generator)](double t, double x, double y, double z, double, double) {
        return g(t, x, y, z);
    };
    c.terminal = std::move(terminal);
    c.lower_obstacle = std::move(lower);
    c.upper_obstacle = std::move(upper);
    GameModel m = to_model("constant", std::move(c), horizon, {0.0}, {0.0});
    m.domain = domain;
    return m;
}

// sigma = 0, b = 0, F = 1, g = 0, h = -1, h' = 0.5 on [0, 1]: u(t) = min(1 - t, 0.5).
inline GameModel clipping_model() {
    return constant_model(
        0.0, 0.0, [](double, double, double, double) { return 1.0; }, [](double) { return 0.0; },
        [](double, double) { return -1.0; }, [](double, double) { return 0.5; });
}

// Risk-sensitive model with constant running cost k, no controls.
inline GameModel risk_sensitive_constant(double k, double sigma, double lower, double upper, double terminal = 0.0) {
    ScalarCoefficients c;
    c.drift = [](double, double, double, double) { return 0.0; };
    c.diffusion = [sigma](double, double, double, double) { return sigma; };
    c.running_cost = [k](double, double, double, double) { return k; };
    c.form = GeneratorForm::RiskSensitive;
    c.terminal = [terminal](double) { return terminal; };
    c.lower_obstacle = [lower](double, double) { return lower; };
    c.upper_obstacle = [upper](double, double) { return upper; };
    GameModel m = to_model("risk_constant", std::move(c), 1.0, {0.0}, {0.0});
    m.domain = {-2.0, 2.0};
    m.quad_growth_c = 0.5;
    return m;
}

}  // namespace isaacs::fixtures
