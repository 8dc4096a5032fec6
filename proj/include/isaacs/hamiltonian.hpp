#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "isaacs/dynamics.hpp"
#include "isaacs/model.hpp"

namespace isaacs {

/// Arguments (t, x, u, q, X) of the lower/upper Hamiltonians. `hessian` is a
/// symmetric n x n matrix in row-major order.
struct HamiltonianQuery {
    double t = 0.0;
    std::vector<double> x{0.0};
    double u = 0.0;
    std::vector<double> q{0.0};
    std::vector<double> hessian{0.0};
};

/// 1/2 Tr(sigma sigma^T X) + <b, q> + F(t, x, u, q sigma, a, b) for one control pair.
double hamiltonian_inner(const GameModel& model, const HamiltonianQuery& query, ControlIndex c);

/// sup over A of inf over B. `best_b[i]` is the minimising B index for A index i.
struct LowerHamiltonian {
    double value = 0.0;
    std::size_t best_a = 0;
    std::vector<std::size_t> best_b;
};

/// inf over B of sup over A. `best_a[j]` is the maximising A index for B index j.
struct UpperHamiltonian {
    double value = 0.0;
    std::size_t best_b = 0;
    std::vector<std::size_t> best_a;
};

/// Reductions over a row-major na x nb table of inner values; ties go to the
/// lowest index.
LowerHamiltonian max_min(std::span<const double> table, std::size_t na, std::size_t nb);
UpperHamiltonian min_max(std::span<const double> table, std::size_t na, std::size_t nb);

LowerHamiltonian eval_h_minus(const GameModel& model, const HamiltonianQuery& query);
UpperHamiltonian eval_h_plus(const GameModel& model, const HamiltonianQuery& query);

/// H+ - H-, nonnegative on finite grids.
double isaacs_gap(const GameModel& model, const HamiltonianQuery& query);

/// Finite differences of a lattice function at one node.
struct NodeDifferences {
    double forward = 0.0;   // (u_{j+1} - u_j) / dx
    double backward = 0.0;  // (u_j - u_{j-1}) / dx
    double central = 0.0;   // (u_{j+1} - u_{j-1}) / (2 dx)
    double second = 0.0;    // (u_{j+1} - 2 u_j + u_{j-1}) / dx^2
};

/// Differences with mirrored ghost values u_{-1} = u_1, u_{nx+1} = u_{nx-1}.
NodeDifferences node_differences(std::span<const double> u, std::size_t j, double dx);

/// Discrete 1D inner expression 1/2 s^2 D2 + b+ D+ - b- D- + F(t, x, u, s Dc, a, b):
/// the drift term is upwinded, the z argument of F uses the central difference.
double discrete_inner(const GameModel& model, double t, double x, double u, double drift, double sigma,
                      const NodeDifferences& d, double alpha, double beta);

}  // namespace isaacs
