#include <gtest/gtest.h>

#include <cmath>

#include "isaacs/dynamics.hpp"
#include "support.hpp"

using namespace isaacs;

namespace {

GameModel drift_vol(double b, double s) {
    return fixtures::constant_model(
        b, s, [](double, double, double, double) { return 0.0; }, [](double) { return 0.0; },
        [](double, double) { return -1.0; }, [](double, double) { return 1.0; });
}

GameModel mean_reverting() {
    ScalarCoefficients c;
    c.drift = [](double, double x, double, double) { return -x; };
    c.diffusion = [](double, double, double, double) { return 0.0; };
    c.running_cost = [](double, double, double, double) { return 0.0; };
    c.form = GeneratorForm::RunningCost;
    c.terminal = [](double) { return 0.0; };
    c.lower_obstacle = [](double, double) { return -1.0; };
    c.upper_obstacle = [](double, double) { return 1.0; };
    return to_model("ou", c, 1.0, {0.0}, {0.0});
}

}  // namespace

TEST(Dynamics, DeterministicDriftEndsExactly) {
    const PathEnsemble e = simulate_paths(drift_vol(1.0, 0.0), {0.0, {0.0}}, constant_policy({}), 100, 10, 3);
    for (std::size_t p = 0; p < e.n_paths; ++p) EXPECT_NEAR(e.state(p, e.steps() - 1), 1.0, 1e-12);
}

TEST(Dynamics, DriftlessMeanNearZero) {
    const std::size_t n = 20000;
    const PathEnsemble e = simulate_paths(drift_vol(0.0, 1.0), {0.0, {0.0}}, constant_policy({}), 50, n, 5);
    double mean = 0.0;
    for (std::size_t p = 0; p < n; ++p) mean += e.state(p, e.steps() - 1);
    mean /= static_cast<double>(n);
    EXPECT_LE(std::abs(mean), 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Dynamics, LinearOdeMatchesExponential) {
    const PathEnsemble e = simulate_paths(mean_reverting(), {0.0, {1.0}}, constant_policy({}), 1000, 1, 1);
    EXPECT_NEAR(e.state(0, 1000), std::exp(-1.0), 2e-3);
}

TEST(Dynamics, SeedReproducible) {
    const auto a = simulate_paths(drift_vol(0.1, 1.0), {0.0, {0.0}}, constant_policy({}), 20, 50, 42);
    const auto b = simulate_paths(drift_vol(0.1, 1.0), {0.0, {0.0}}, constant_policy({}), 20, 50, 42);
    const auto c = simulate_paths(drift_vol(0.1, 1.0), {0.0, {0.0}}, constant_policy({}), 20, 50, 43);
    EXPECT_EQ(a.states, b.states);
    EXPECT_NE(a.states, c.states);
}

TEST(Dynamics, MomentBoundConstantPaths) {
    const PathEnsemble e = simulate_paths(drift_vol(0.0, 0.0), {0.0, {2.0}}, constant_policy({}), 10, 5, 1);
    EXPECT_NEAR(estimate_moment_bound(e, 2), 4.0 / 5.0, 1e-12);
}

TEST(Dynamics, MomentBoundBrownianWithinDoob) {
    const PathEnsemble e = simulate_paths(drift_vol(0.0, 1.0), {0.0, {0.0}}, constant_policy({}), 200, 4000, 9);
    const double c2 = estimate_moment_bound(e, 2);
    EXPECT_GE(c2, 1.0 * 0.9);
    EXPECT_LE(c2, 4.0);
}

TEST(Dynamics, MomentBoundRatiosComparable) {
    std::vector<double> r;
    for (double x0 : {0.0, 1.0, 10.0}) {
        const auto e = simulate_paths(drift_vol(0.0, 1.0), {0.0, {x0}}, constant_policy({}), 100, 2000, 4);
        r.push_back(estimate_moment_bound(e, 2));
    }
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    EXPECT_LE(*hi / *lo, 5.0);
}

TEST(Dynamics, DiffusionStencil) {
    const auto grid = SpaceTimeGrid::make(-1.0, 1.0, 20, 250, 1.0);  // dx = 0.1, dt = 0.004
    const MarkovChain ch = build_markov_chain(drift_vol(0.0, 1.0), grid);
    const Stencil& s = ch.stencil(0, 10, {});
    EXPECT_NEAR(s.up, 0.2, 1e-12);
    EXPECT_NEAR(s.down, 0.2, 1e-12);
    EXPECT_NEAR(s.stay, 0.6, 1e-12);
}

TEST(Dynamics, PureDriftStencil) {
    const auto grid = SpaceTimeGrid::make(-1.0, 1.0, 20, 20, 1.0);  // dt = 0.05
    const MarkovChain ch = build_markov_chain(drift_vol(1.0, 0.0), grid);
    const Stencil& s = ch.stencil(0, 10, {});
    EXPECT_NEAR(s.up, 0.5, 1e-12);
    EXPECT_NEAR(s.down, 0.0, 1e-12);
    EXPECT_NEAR(s.stay, 0.5, 1e-12);
}

TEST(Dynamics, ChainCflViolation) {
    const auto grid = SpaceTimeGrid::make(-1.0, 1.0, 20, 50, 1.0);  // dt = 0.02
    try {
        build_markov_chain(drift_vol(0.0, 1.0), grid);
        FAIL() << "expected CFLViolation";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CFLViolation);
    }
}

TEST(Dynamics, ChainReflectsAtEnds) {
    const auto grid = SpaceTimeGrid::make(-1.0, 1.0, 20, 250, 1.0);
    const MarkovChain ch = build_markov_chain(drift_vol(0.0, 1.0), grid);
    EXPECT_EQ(ch.neighbours(0), (std::pair<std::size_t, std::size_t>{1, 1}));
    EXPECT_EQ(ch.neighbours(20), (std::pair<std::size_t, std::size_t>{19, 19}));
    std::vector<double> ones(grid.nodes(), 1.0);
    EXPECT_NEAR(ch.expectation(0, 0, {}, ones), 1.0, 1e-15);
    std::vector<double> lin(grid.nodes());
    for (std::size_t j = 0; j < lin.size(); ++j) lin[j] = grid.x(j);
    EXPECT_NEAR(ch.expectation(0, 10, {}, lin), grid.x(10), 1e-15);
    EXPECT_EQ(ch.z_estimate(0, 0, {}, lin), 0.0);
}

TEST(Dynamics, FeedbackPolicyTable) {
    const auto grid = SpaceTimeGrid::make(0.0, 1.0, 4, 2, 1.0);
    const ChainPolicy p =
        ChainPolicy::from_feedback(grid, [](double t, Point x) { return ControlIndex{x[0] > 0.5 ? 1u : 0u, t > 0.2 ? 1u : 0u}; });
    EXPECT_EQ(p.at(0, 0), (ControlIndex{0, 0}));
    EXPECT_EQ(p.at(1, 4), (ControlIndex{1, 1}));
    const ControlPolicy fb = p.as_feedback(grid);
    const double x = 0.9;
    EXPECT_EQ(fb(0.6, Point(&x, 1)), (ControlIndex{1, 1}));
}
