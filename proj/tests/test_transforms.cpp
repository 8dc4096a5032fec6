#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isaacs/pde.hpp"
#include "isaacs/transforms.hpp"
#include "support.hpp"

using namespace isaacs;

namespace {

double eval(const GeneratorFn& f, double t, double x, double y, double z) {
    return f(t, Point(&x, 1), y, Point(&z, 1), 0.0, 0.0);
}

GeneratorFn zero_generator() {
    return [](double, Point, double, Point, double, double) { return 0.0; };
}

ApproximationDomain unit_domain() {
    ApproximationDomain d;
    d.x = {-2.0, 2.0};
    d.y = {0.0, 2.0};
    return d;
}

}  // namespace

TEST(Transforms, GeneratorDirectSubstitution) {
    const GeneratorFn f = exp_transform_generator(zero_generator(), 1.0);
    EXPECT_DOUBLE_EQ(eval(f, 0.0, 0.0, 1.0, 1.0), -0.5);
}

TEST(Transforms, NonpositiveYGivesZero) {
    const GeneratorFn F = [](double, Point, double, Point, double, double) { return 17.0; };
    const GeneratorFn f = exp_transform_generator(F, 0.5);
    EXPECT_EQ(eval(f, 0.0, 0.0, -0.3, 2.0), 0.0);
    EXPECT_EQ(eval(f, 0.0, 0.0, 0.0, 2.0), 0.0);
}

TEST(Transforms, QuadraticCancellation) {
    const double phi = 2.0;
    const GeneratorFn F = [phi](double, Point, double, Point z, double, double) { return phi + 0.5 * z[0] * z[0]; };
    const GeneratorFn f = exp_transform_generator(F, 0.5);
    for (double z : {-7.0, -1.0, 0.0, 0.3, 4.0}) EXPECT_NEAR(eval(f, 0.0, 0.0, 3.0, z), 6.0, 1e-12);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uy(0.01, 10.0), uz(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const double y = uy(rng), z = uz(rng);
        EXPECT_NEAR(eval(f, 0.0, 0.0, y, z) - phi * y, 0.0, 1e-10 * (1.0 + z * z / y));
    }
}

TEST(Transforms, AlgebraicRoundtrip) {
    const double c = 0.7;
    const GeneratorFn F = [](double t, Point x, double y, Point z, double, double) {
        return std::sin(x[0]) + t * y + 0.3 * z[0] * z[0] - 0.2 * z[0];
    };
    const GeneratorFn f = exp_transform_generator(F, c);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const double t = 0.5 * (u(rng) + 1.0), x = 2.0 * u(rng), uu = u(rng), v = 3.0 * u(rng);
        const double y = std::exp(2.0 * c * uu);
        const double expected = 2.0 * c * y * (F(t, Point(&x, 1), uu, Point(&v, 1), 0.0, 0.0) - c * v * v);
        EXPECT_NEAR(eval(f, t, x, y, 2.0 * c * y * v), expected, 1e-10 * (1.0 + std::abs(expected)));
    }
}

TEST(Transforms, DataExponentials) {
    const auto grid = SpaceTimeGrid::make(-2.0, 2.0, 8, 4, 1.0);
    const TransformedModel zero_lower = transform_data(fixtures::risk_sensitive_constant(0.0, 0.5, 0.0, 1.0, 0.5), grid);
    EXPECT_EQ(zero_lower.model.lower_at(0.3, 0.1), 1.0);
    const TransformedModel ln2 =
        transform_data(fixtures::risk_sensitive_constant(0.0, 0.5, -1.0, 1.0, std::log(2.0)), grid);
    EXPECT_NEAR(ln2.model.terminal_at(0.4), 2.0, 1e-15);
    EXPECT_NEAR(ln2.m_bound, std::exp(1.0), 1e-14);
    EXPECT_EQ(ln2.model.form, GeneratorForm::General);
}

TEST(Transforms, InverseValue) {
    EXPECT_EQ(inverse_transform_value(1.0, 0.5), 0.0);
    EXPECT_NEAR(inverse_transform_value(std::exp(1.0), 0.5), 1.0, 1e-15);
    for (double v : {-2.0, -0.1, 0.0, 0.7, 3.0}) EXPECT_NEAR(inverse_transform_value(std::exp(2.0 * 0.8 * v), 0.8), v, 1e-14);
    for (double bad : {0.0, -1.0}) {
        try {
            inverse_transform_value(bad, 0.5);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::NonpositiveInput);
        }
    }
}

TEST(Transforms, SmoothCutoffShape) {
    EXPECT_EQ(smooth_cutoff(0.0, 2.0), 1.0);
    EXPECT_EQ(smooth_cutoff(-2.0, 2.0), 1.0);
    EXPECT_EQ(smooth_cutoff(3.0, 2.0), 0.0);
    EXPECT_EQ(smooth_cutoff(-5.0, 2.0), 0.0);
    double prev = 1.0;
    for (double s = 2.0; s <= 3.0; s += 0.01) {
        const double r = smooth_cutoff(s, 2.0);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, prev);
        prev = r;
    }
}

TEST(Transforms, MollifierWeightsNormalised) {
    const MollifierStencil& s = mollifier_stencil();
    double total = 0.0;
    for (std::size_t k = 0; k < s.weight.size(); ++k) {
        total += s.weight[k];
        EXPECT_LE(s.dx[k] * s.dx[k] + s.dy[k] * s.dy[k] + s.dz[k] * s.dz[k], 1.0);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Transforms, ConstantSurvivesApproximation) {
    const ApproximationSchedule sched = make_approximation_schedule(zero_generator(), unit_domain(), 4);
    const GeneratorFn up = build_lipschitz_approximation(zero_generator(), sched, 2, ApproxDirection::Upper);
    const GeneratorFn lo = build_lipschitz_approximation(zero_generator(), sched, 2, ApproxDirection::Lower);
    for (auto [x, z] : {std::pair{0.0, 0.0}, {0.5, -0.5}, {-0.2, 0.3}}) {
        EXPECT_NEAR(eval(up, 0.5, x, 1.0, z), 3.0 / 16.0, 1e-12);
        EXPECT_NEAR(eval(lo, 0.5, x, 1.0, z), -3.0 / 16.0, 1e-12);
    }
}

TEST(Transforms, ScheduleStrictlyDecreasing) {
    const GameModel m = builtin_model("risk_sensitive_1d");
    const auto grid = SpaceTimeGrid::make(-2.0, 2.0, 20, 10, 1.0);
    const TransformedModel tm = transform_data(m, grid);
    const GeneratorFn ft = cutoff_generator(tm.model.generator, tm.c, tm.m_bound);
    const ApproximationSchedule s = make_approximation_schedule(ft, approximation_domain(tm), 8);
    for (int p = 1; p <= 8; ++p) {
        EXPECT_LE(s.measured_error[p], std::ldexp(1.0, -(p + 2)));
        if (p > 1) EXPECT_LT(s.eps[p], s.eps[p - 1]);
    }
    EXPECT_GT(s.c_prime, 0.0);
}

TEST(Transforms, ChainOrderAndConvergence) {
    const GameModel m = builtin_model("risk_sensitive_1d");
    const auto grid = SpaceTimeGrid::make(-2.0, 2.0, 20, 10, 1.0);
    const TransformedModel tm = transform_data(m, grid);
    const GeneratorFn ft = cutoff_generator(tm.model.generator, tm.c, tm.m_bound);
    const ApproximationDomain d = approximation_domain(tm);
    const ApproximationSchedule s = make_approximation_schedule(ft, d, 11);
    std::vector<GeneratorFn> up;
    for (int p = 1; p <= 11; ++p) up.push_back(build_lipschitz_approximation(ft, s, p, ApproxDirection::Upper));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double t = u(rng), x = d.x.lo + (d.x.hi - d.x.lo) * u(rng), y = d.y.hi * u(rng);
        const double z = 4.0 * (2.0 * u(rng) - 1.0);
        for (std::size_t p = 1; p < 10; ++p) ASSERT_LE(eval(up[p], t, x, y, z), eval(up[p - 1], t, x, y, z) + 1e-12);
        for (int p = 1; p <= 11; ++p) {
            if (std::abs(x) + std::abs(z) <= p - 1)
                ASSERT_LE(std::abs(eval(up[p - 1], t, x, y, z) - eval(ft, t, x, y, z)), 2.0 * std::ldexp(1.0, -p));
        }
    }
}

TEST(Transforms, TwoDimensionalNoiseUnsupported) {
    ApproximationDomain d = unit_domain();
    d.noise_dim = 2;
    try {
        make_approximation_schedule(zero_generator(), d, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionUnsupported);
    }
}
