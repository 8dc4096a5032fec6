#include "isaacs/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace isaacs {

double hamiltonian_inner(const GameModel& model, const HamiltonianQuery& query, ControlIndex c) {
    const std::size_t n = model.state_dim;
    const std::size_t d = model.noise_dim;
    if (query.x.size() != n || query.q.size() != n || query.hessian.size() != n * n) {
        throw Error(ErrorKind::InvalidArgument, "Hamiltonian query dimension mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (query.hessian[i * n + k] != query.hessian[k * n + i]) {
                throw Error(ErrorKind::InvalidArgument, "second-derivative matrix must be symmetric");
            }
        }
    }
    const double a = model.control_grid_a.at(c.a);
    const double b = model.control_grid_b.at(c.b);
    std::vector<double> drift(n), sigma(n * d);
    model.drift(query.t, query.x, a, b, drift);
    model.diffusion(query.t, query.x, a, b, sigma);

    // Tr(sigma sigma^T X) = sum_{i,k} (sigma sigma^T)_{ik} X_{ki}
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            double ss = 0.0;
            for (std::size_t l = 0; l < d; ++l) ss += sigma[i * d + l] * sigma[k * d + l];
            trace += ss * query.hessian[k * n + i];
        }
    }
    double bq = 0.0;
    for (std::size_t i = 0; i < n; ++i) bq += drift[i] * query.q[i];
    std::vector<double> z(d, 0.0);
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t i = 0; i < n; ++i) z[l] += query.q[i] * sigma[i * d + l];
    return 0.5 * trace + bq + model.generator(query.t, query.x, query.u, z, a, b);
}

LowerHamiltonian max_min(std::span<const double> table, std::size_t na, std::size_t nb) {
    LowerHamiltonian out;
    out.best_b.resize(na);
    for (std::size_t i = 0; i < na; ++i) {
        std::size_t arg = 0;
        for (std::size_t j = 1; j < nb; ++j) {
            if (table[i * nb + j] < table[i * nb + arg]) arg = j;
        }
        out.best_b[i] = arg;
        const double inner_min = table[i * nb + arg];
        if (i == 0 || inner_min > out.value) {
            out.value = inner_min;
            out.best_a = i;
        }
    }
    return out;
}

UpperHamiltonian min_max(std::span<const double> table, std::size_t na, std::size_t nb) {
    UpperHamiltonian out;
    out.best_a.resize(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < na; ++i) {
            if (table[i * nb + j] > table[arg * nb + j]) arg = i;
        }
        out.best_a[j] = arg;
        const double inner_max = table[arg * nb + j];
        if (j == 0 || inner_max < out.value) {
            out.value = inner_max;
            out.best_b = j;
        }
    }
    return out;
}

namespace {

std::vector<double> inner_table(const GameModel& model, const HamiltonianQuery& query) {
    const std::size_t na = model.control_grid_a.size();
    const std::size_t nb = model.control_grid_b.size();
    if (na == 0 || nb == 0) throw Error(ErrorKind::InvalidArgument, "control grids must be nonempty");
    std::vector<double> table(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) table[i * nb + j] = hamiltonian_inner(model, query, {i, j});
    return table;
}

}  // namespace

LowerHamiltonian eval_h_minus(const GameModel& model, const HamiltonianQuery& query) {
    return max_min(inner_table(model, query), model.control_grid_a.size(), model.control_grid_b.size());
}

UpperHamiltonian eval_h_plus(const GameModel& model, const HamiltonianQuery& query) {
    return min_max(inner_table(model, query), model.control_grid_a.size(), model.control_grid_b.size());
}

double isaacs_gap(const GameModel& model, const HamiltonianQuery& query) {
    const auto table = inner_table(model, query);
    const std::size_t na = model.control_grid_a.size();
    const std::size_t nb = model.control_grid_b.size();
    return min_max(table, na, nb).value - max_min(table, na, nb).value;
}

NodeDifferences node_differences(std::span<const double> u, std::size_t j, double dx) {
    const std::size_t last = u.size() - 1;
    const double um = u[j == 0 ? 1 : j - 1];
    const double up = u[j == last ? last - 1 : j + 1];
    const double uj = u[j];
    return {(up - uj) / dx, (uj - um) / dx, (up - um) / (2.0 * dx), (up - 2.0 * uj + um) / (dx * dx)};
}

double discrete_inner(const GameModel& model, double t, double x, double u, double drift, double sigma,
                      const NodeDifferences& d, double alpha, double beta) {
    const double transport = std::max(drift, 0.0) * d.forward - std::max(-drift, 0.0) * d.backward;
    return 0.5 * sigma * sigma * d.second + transport + model.generator_at(t, x, u, sigma * d.central, alpha, beta);
}

}  // namespace isaacs
