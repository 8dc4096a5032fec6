#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "isaacs/dynkin.hpp"
#include "support.hpp"

using namespace isaacs;

namespace {

GameModel running_model(double k, double sigma, std::function<double(double)> g, std::function<double(double, double)> h,
                        std::function<double(double, double)> hp, double horizon = 1.0) {
    ScalarCoefficients c;
    c.drift = [](double, double, double, double) { return 0.0; };
    c.diffusion = [sigma](double, double, double, double) { return sigma; };
    c.running_cost = [k](double, double, double, double) { return k; };
    c.form = GeneratorForm::RunningCost;
    c.terminal = std::move(g);
    c.lower_obstacle = std::move(h);
    c.upper_obstacle = std::move(hp);
    return to_model("running", c, horizon, {0.0}, {0.0});
}

struct Game {
    SpaceTimeGrid grid;
    MarkovChain chain;
    ChainPolicy policy;
    DynkinData data;
    Game(const GameModel& m, SpaceTimeGrid g) : grid(g) {
        chain = build_markov_chain(m, grid);
        policy = ChainPolicy::constant(grid, {});
        data = dynkin_data(m, grid, policy);
    }
};

// Binomial chain: dx = 0.5, sigma = 1, dt = 0.25 gives p_up = p_down = 1/2.
SpaceTimeGrid binomial(std::size_t nt) { return SpaceTimeGrid::make(-1.0, 1.0, 4, nt, 0.25 * static_cast<double>(nt)); }

GameModel band_model(double width, double sigma = 1.0, double horizon = 0.5) {
    return running_model(
        0.0, sigma, [](double x) { return x; }, [width](double, double x) { return x - width; },
        [width](double, double x) { return x + width; }, horizon);
}

}  // namespace

TEST(Dynkin, OneStepClampOfExpectation) {
    const GameModel m = running_model(
        0.0, 1.0, [](double) { return 5.0; }, [](double, double) { return 0.0; }, [](double, double) { return 10.0; },
        0.25);
    Game s(m, binomial(1));
    EXPECT_EQ(dynkin_value(s.chain, s.policy, s.data).value(0, 2), 5.0);
}

TEST(Dynkin, ConstantCostLinearRecursion) {
    const double k = 0.3;
    const GameModel m = running_model(
        k, 1.0, [](double x) { return x * x; }, [](double, double) { return -10.0; }, [](double, double) { return 10.0; },
        0.75);
    Game s(m, binomial(3));
    // Binomial walk from x = 0 with reflection at +-1: X_T in {-1, -0.5, 0.5, 1} after 3 steps.
    std::vector<double> v(5);
    for (std::size_t j = 0; j < 5; ++j) v[j] = s.grid.x(j) * s.grid.x(j);
    for (int n = 0; n < 3; ++n) {
        std::vector<double> p(5);
        for (std::size_t j = 0; j < 5; ++j) {
            const std::size_t lo = j == 0 ? 1 : j - 1, hi = j == 4 ? 3 : j + 1;
            p[j] = 0.5 * (v[lo] + v[hi]);
        }
        v = p;
    }
    EXPECT_NEAR(dynkin_value(s.chain, s.policy, s.data).value(0, 2), v[2] + k * 0.75, 1e-14);
}

TEST(Dynkin, BinomialMatchesBruteForce) {
    Game s(band_model(0.4), binomial(2));
    const DynkinValue v = dynkin_value(s.chain, s.policy, s.data);
    const GameBounds b = brute_force_game_value(s.chain, s.policy, s.data, 2);
    EXPECT_EQ(b.inf_sup, v.value(0, 2));
    EXPECT_EQ(b.sup_inf, v.value(0, 2));
}

TEST(Dynkin, SingleLevelHasNoStoppingFreedom) {
    const GameModel m = running_model(
        0.0, 1.0, [](double x) { return std::sin(x); }, [](double, double) { return -5.0; },
        [](double, double) { return 5.0; }, 0.25);
    Game s(m, binomial(1));
    const GameBounds b = brute_force_game_value(s.chain, s.policy, s.data, 2);
    const double expected = 0.5 * (std::sin(-0.5) + std::sin(0.5));
    EXPECT_NEAR(b.inf_sup, expected, 1e-15);
    EXPECT_EQ(b.inf_sup, b.sup_inf);
}

TEST(Dynkin, DeterministicTwoLevel) {
    const GameModel m = running_model(
        0.0, 0.0, [](double) { return 0.0; }, [](double, double) { return -1.0; }, [](double, double) { return 1.0; },
        1.0);
    Game s(m, SpaceTimeGrid::make(-1.0, 1.0, 4, 2, 1.0));
    const GameBounds b = brute_force_game_value(s.chain, s.policy, s.data, 2);
    EXPECT_EQ(b.inf_sup, 0.0);
    EXPECT_EQ(b.sup_inf, 0.0);
}

TEST(Dynkin, OptimalRulesAreASaddle) {
    Game s(band_model(0.3, 1.0, 1.0), binomial(4));
    const DynkinValue v = dynkin_value(s.chain, s.policy, s.data);
    const auto at_rules = stopped_value(s.chain, s.policy, s.data, v.sigma_rule, v.tau_rule, PayoffMode::Additive);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(at_rules(0, j), v.value(0, j), 1e-14);
    const auto tau_never = stopped_value(s.chain, s.policy, s.data, v.sigma_rule,
                                         StoppingRule::never(s.grid, StopOwner::MinPlayer), PayoffMode::Additive);
    const auto sigma_never = stopped_value(s.chain, s.policy, s.data, StoppingRule::never(s.grid, StopOwner::MaxPlayer),
                                           v.tau_rule, PayoffMode::Additive);
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_GE(tau_never(0, j), v.value(0, j) - 1e-14);
        EXPECT_LE(sigma_never(0, j), v.value(0, j) + 1e-14);
    }
}

TEST(Dynkin, MonotoneInData) {
    Game s(band_model(0.3, 1.0, 1.0), binomial(4));
    const double base = dynkin_value(s.chain, s.policy, s.data).value(0, 2);
    for (int which = 0; which < 3; ++which) {
        DynkinData d = s.data;
        if (which == 0)
            for (double& g : d.terminal) g += 0.05;
        for (std::size_t n = 0; n < s.grid.levels(); ++n)
            for (std::size_t j = 0; j < s.grid.nodes(); ++j) {
                if (which == 1) d.lower(n, j) += 0.05;
                if (which == 2) d.upper(n, j) += 0.05;
            }
        if (which != 0)
            for (std::size_t j = 0; j < s.grid.nodes(); ++j) d.terminal[j] = std::clamp(d.terminal[j], d.lower(s.grid.nt, j), d.upper(s.grid.nt, j));
        EXPECT_GE(dynkin_value(s.chain, s.policy, d).value(0, 2), base) << which;
    }
}

TEST(Dynkin, BruteForceTooLarge) {
    Game s(band_model(0.4, 1.0, 1.25), binomial(5));
    try {
        brute_force_game_value(s.chain, s.policy, s.data, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
    }
}

TEST(Dynkin, MonteCarloDeterministicPayouts) {
    const double c = 0.4, k = 0.3;
    const auto grid = SpaceTimeGrid::make(-2.0, 2.0, 20, 50, 1.0);
    const GameModel flat = running_model(
        0.0, 0.5, [c](double) { return c; }, [](double, double) { return -1.0; }, [](double, double) { return 1.0; });
    const auto never_s = StoppingRule::never(grid, StopOwner::MaxPlayer);
    const auto never_t = StoppingRule::never(grid, StopOwner::MinPlayer);
    const MonteCarloEstimate a = risk_sensitive_payoff_mc(flat, constant_policy({}), never_s, never_t, grid, 0.0, 500, 1);
    EXPECT_EQ(a.mean, std::exp(c));
    EXPECT_EQ(a.std_error, 0.0);
    const GameModel cost = running_model(
        k, 0.5, [](double) { return 0.0; }, [](double, double) { return -1.0; }, [](double, double) { return 1.0; });
    const MonteCarloEstimate b = risk_sensitive_payoff_mc(cost, constant_policy({}), never_s, never_t, grid, 0.0, 500, 1);
    EXPECT_NEAR(b.mean, std::exp(k), 1e-14);
}

TEST(Dynkin, ExponentialIdentityTrivialCases) {
    const auto grid = SpaceTimeGrid::make(-2.0, 2.0, 20, 50, 1.0);
    const auto never_s = StoppingRule::never(grid, StopOwner::MaxPlayer);
    const auto never_t = StoppingRule::never(grid, StopOwner::MinPlayer);
    const GameModel flat = running_model(
        0.0, 0.5, [](double) { return 0.4; }, [](double, double) { return -1.0; }, [](double, double) { return 1.0; });
    const auto r0 = verify_exponential_identity(flat, ChainPolicy::constant(grid, {}), never_s, never_t,
                                                build_markov_chain(flat, grid), 0.0, 1000, 2);
    EXPECT_EQ(r0.gap, 0.0);
    const GameModel cost = running_model(
        0.3, 0.5, [](double) { return 0.0; }, [](double, double) { return -1.0; }, [](double, double) { return 1.0; });
    const auto r1 = verify_exponential_identity(cost, ChainPolicy::constant(grid, {}), never_s, never_t,
                                                build_markov_chain(cost, grid), 0.0, 1000, 2);
    EXPECT_LE(std::abs(r1.gap), 1e-12);
}

TEST(Dynkin, ExponentialIdentityBindingStop) {
    const GameModel m = builtin_model("risk_sensitive_1d");
    const auto grid = SpaceTimeGrid::make(m.domain.lo, m.domain.hi, 100, 400, 1.0);
    const auto policy = ChainPolicy::constant(grid, {1, 1});
    const auto tau = StoppingRule::from_region(grid, StopOwner::MinPlayer, [](double, double x) { return x > 0.8; });
    const auto r = verify_exponential_identity(m, policy, StoppingRule::never(grid, StopOwner::MaxPlayer), tau,
                                               build_markov_chain(m, grid), m.x0, 100000, 17);
    EXPECT_TRUE(r.pass) << r.gap << " vs " << r.tolerance;
}

TEST(Dynkin, CsvExport) {
    Game s(band_model(0.4), binomial(2));
    const auto file = std::filesystem::temp_directory_path() / "isaacs_dynkin_test.csv";
    write_dynkin_csv(dynkin_value(s.chain, s.policy, s.data), file);
    std::ifstream in(file);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "t,x,value,flag,sigma_stop,tau_stop");
    std::filesystem::remove(file);
}
