#include <gtest/gtest.h>

#include <cmath>

#include "isaacs/hamiltonian.hpp"
#include "support.hpp"

using namespace isaacs;

namespace {

HamiltonianQuery query(double q, double hess, double u = 0.0) {
    HamiltonianQuery h;
    h.q = {q};
    h.hessian = {hess};
    h.u = u;
    return h;
}

GameModel controlled(std::function<double(double, double)> drift, std::vector<double> a, std::vector<double> b) {
    ScalarCoefficients c;
    c.drift = [d = std::move(drift)](double, double, double al, double be) { return d(al, be); };
    c.diffusion = [](double, double, double, double) { return 0.0; };
    c.generator = [](double, double, double, double, double, double) { return 0.0; };
    c.terminal = [](double) { return 0.0; };
    c.lower_obstacle = [](double, double) { return -1.0; };
    c.upper_obstacle = [](double, double) { return 1.0; };
    return to_model("controlled", c, 1.0, std::move(a), std::move(b));
}

}  // namespace

TEST(Hamiltonian, SecondOrderTerm) {
    const GameModel m = fixtures::constant_model(
        0.0, std::sqrt(2.0), [](double, double, double, double) { return 0.0; }, [](double) { return 0.0; },
        [](double, double) { return -1.0; }, [](double, double) { return 1.0; });
    EXPECT_NEAR(hamiltonian_inner(m, query(0.0, 2.0), {}), 2.0, 1e-14);
}

TEST(Hamiltonian, QuadraticGenerator) {
    const GameModel m = fixtures::risk_sensitive_constant(0.0, 1.0, -1.0, 1.0);
    EXPECT_DOUBLE_EQ(hamiltonian_inner(m, query(3.0, 0.0), {}), 4.5);
}

TEST(Hamiltonian, SumOfTerms) {
    const GameModel m = fixtures::constant_model(
        2.0, 1.0, [](double, double, double, double) { return 1.0; }, [](double) { return 0.0; },
        [](double, double) { return -1.0; }, [](double, double) { return 1.0; });
    EXPECT_DOUBLE_EQ(hamiltonian_inner(m, query(1.0, 1.0), {}), 3.5);
}

TEST(Hamiltonian, SingletonGridsCoincide) {
    const GameModel m = builtin_model("heat_no_control");
    const auto q = query(0.7, -0.3, 0.2);
    const double inner = hamiltonian_inner(m, q, {});
    EXPECT_EQ(eval_h_minus(m, q).value, inner);
    EXPECT_EQ(eval_h_plus(m, q).value, inner);
    EXPECT_EQ(isaacs_gap(m, q), 0.0);
}

TEST(Hamiltonian, ProductDriftEnumeration) {
    const GameModel m = controlled([](double a, double b) { return a * b; }, {-1.0, 1.0}, {-1.0, 1.0});
    const auto q = query(1.0, 0.0);
    EXPECT_DOUBLE_EQ(eval_h_minus(m, q).value, -1.0);
    EXPECT_DOUBLE_EQ(eval_h_plus(m, q).value, 1.0);
    EXPECT_DOUBLE_EQ(isaacs_gap(m, q), 2.0);
}

TEST(Hamiltonian, SumDriftEnumeration) {
    const GameModel m = controlled([](double a, double b) { return a + b; }, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0});
    const auto q = query(1.0, 0.0);
    const LowerHamiltonian lo = eval_h_minus(m, q);
    EXPECT_DOUBLE_EQ(lo.value, 0.0);
    EXPECT_EQ(lo.best_a, 2u);
    EXPECT_EQ(lo.best_b[lo.best_a], 0u);
    EXPECT_DOUBLE_EQ(eval_h_plus(m, q).value, 0.0);
    for (double qq = -3.0; qq <= 3.0; qq += 0.5) EXPECT_EQ(isaacs_gap(m, query(qq, 0.0)), 0.0);
}

TEST(Hamiltonian, ReductionsBreakTiesLow) {
    const std::vector<double> t{1.0, 1.0, 1.0, 1.0};
    const LowerHamiltonian lo = max_min(t, 2, 2);
    const UpperHamiltonian hi = min_max(t, 2, 2);
    EXPECT_EQ(lo.best_a, 0u);
    EXPECT_EQ(hi.best_b, 0u);
}

TEST(Hamiltonian, MirroredDifferences) {
    const std::vector<double> u{1.0, 2.0, 4.0, 7.0, 11.0};
    const NodeDifferences mid = node_differences(u, 2, 0.5);
    EXPECT_DOUBLE_EQ(mid.forward, 6.0);
    EXPECT_DOUBLE_EQ(mid.backward, 4.0);
    EXPECT_DOUBLE_EQ(mid.central, 5.0);
    EXPECT_DOUBLE_EQ(mid.second, 4.0);
    const NodeDifferences left = node_differences(u, 0, 1.0);
    EXPECT_DOUBLE_EQ(left.central, 0.0);
    EXPECT_DOUBLE_EQ(left.second, 2.0);
    const NodeDifferences right = node_differences(u, 4, 1.0);
    EXPECT_DOUBLE_EQ(right.central, 0.0);
    EXPECT_DOUBLE_EQ(right.second, -8.0);
}

TEST(Hamiltonian, DiscreteInnerUpwinds) {
    const GameModel m = fixtures::constant_model(
        0.0, 0.0, [](double, double, double, double) { return 0.0; }, [](double) { return 0.0; },
        [](double, double) { return -1.0; }, [](double, double) { return 1.0; });
    NodeDifferences d;
    d.forward = 3.0;
    d.backward = 1.0;
    EXPECT_DOUBLE_EQ(discrete_inner(m, 0.0, 0.0, 0.0, 2.0, 0.0, d, 0.0, 0.0), 6.0);
    EXPECT_DOUBLE_EQ(discrete_inner(m, 0.0, 0.0, 0.0, -2.0, 0.0, d, 0.0, 0.0), -2.0);
}
