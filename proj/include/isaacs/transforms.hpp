#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "isaacs/grid.hpp"
#include "isaacs/model.hpp"

namespace isaacs {

/// f(t,x,y,z,a,b) = 2Cy [F(t, x, ln y/(2C), z/(2Cy), a, b) - |z|^2/(4C^2 y^2)] for
/// y > 0 and 0 otherwise.
GeneratorFn exp_transform_generator(GeneratorFn generator, double c);

struct TransformedModel {
    GameModel model;  // generator f, terminal e^{2Cg}, obstacles e^{2Ch}, e^{2Ch'}
    double c = 1.0;
    double m_bound = 0.0;  // max{sup 1/h_bar, sup h_bar'} over the probe grid
};

/// Exponential transform of generator and data with C = model.quad_growth_c;
/// M is probed on the grid nodes and levels.
TransformedModel transform_data(const GameModel& model, const SpaceTimeGrid& probe);

/// ln(y) / (2C). Throws NonpositiveInput for y <= 0.
double inverse_transform_value(double y, double c);

/// C^1 cutoff: 1 on [-p, p], 0 outside [-(p+1), p+1], smoothstep in between.
double smooth_cutoff(double s, double p);

/// f_tilde = f * rho_M(ln y / (2C)); bounded because the cutoff confines y to
/// [e^{-2C(M+1)}, e^{2C(M+1)}].
GeneratorFn cutoff_generator(GeneratorFn f, double c, double m_bound);

enum class ApproxDirection { Upper, Lower };

/// Region on which mollification errors and the bound C' are measured.
struct ApproximationDomain {
    Interval x{-1.0, 1.0};
    Interval y{0.0, 1.0};
    double horizon = 1.0;
    std::vector<double> control_a{0.0};
    std::vector<double> control_b{0.0};
    std::size_t state_dim = 1;
    std::size_t noise_dim = 1;
};

/// Domain for a transformed model: x over the model domain, y over the support
/// of the M-cutoff.
ApproximationDomain approximation_domain(const TransformedModel& transformed);

struct ApproximationSchedule {
    int p_max = 12;
    std::vector<double> eps;             // eps[p], p = 1..p_max (eps[0] unused)
    std::vector<double> measured_error;  // sampled mollification error at eps[p]
    double c_prime = 0.0;
    ApproximationDomain domain;
};

/// Chooses eps_p by halving until the sampled mollification error of the
/// shifted cutoff generator is at most half of 2^{-(p+2)}; eps_p is strictly
/// decreasing. Throws DimensionUnsupported when n + 1 + d > 3.
ApproximationSchedule make_approximation_schedule(const GeneratorFn& f_tilde, const ApproximationDomain& domain,
                                                  int p_max, std::uint64_t seed = 11, std::size_t samples = 200);

/// Mollified, shifted and blended generator f^p (Upper) or f_p (Lower).
/// Throws DimensionUnsupported when n + 1 + d > 3, InvalidArgument for p
/// outside 1..p_max.
GeneratorFn build_lipschitz_approximation(const GeneratorFn& f_tilde, const ApproximationSchedule& schedule, int p,
                                          ApproxDirection direction);

/// Unit-ball lattice offsets (spacing 1/8) and normalised bump weights used for
/// the discrete convolution.
struct MollifierStencil {
    std::vector<double> dx, dy, dz, weight;
};
const MollifierStencil& mollifier_stencil();

}  // namespace isaacs
