#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "isaacs/grid.hpp"
#include "isaacs/model.hpp"

namespace isaacs {

/// Indices into a model's control grids.
struct ControlIndex {
    std::size_t a = 0;
    std::size_t b = 0;
    friend bool operator==(const ControlIndex&, const ControlIndex&) = default;
};

/// Feedback map (t, x) -> control indices. Must be pure.
using ControlPolicy = std::function<ControlIndex(double t, Point x)>;

ControlPolicy constant_policy(ControlIndex index);

/// Control indices per (level, node) for levels 0..nt-1 of a grid.
class ChainPolicy {
public:
    ChainPolicy() = default;
    static ChainPolicy constant(const SpaceTimeGrid& grid, ControlIndex index);
    static ChainPolicy from_feedback(const SpaceTimeGrid& grid, const ControlPolicy& policy);
    explicit ChainPolicy(LevelField<ControlIndex> table) : table_(std::move(table)) {}

    ControlIndex at(std::size_t level, std::size_t node) const { return table_(level, node); }
    const LevelField<ControlIndex>& table() const { return table_; }

    /// Piecewise-constant feedback: level containing t, nearest node to x.
    ControlPolicy as_feedback(const SpaceTimeGrid& grid) const;

private:
    LevelField<ControlIndex> table_;
};

struct SimulationStart {
    double t0 = 0.0;
    std::vector<double> x0{0.0};
};

struct PathEnsemble {
    std::vector<double> times;      // nt + 1 levels
    std::size_t n_paths = 0;
    std::size_t state_dim = 1;
    std::vector<double> states;     // [path][step][dim]
    std::vector<double> alpha;      // [path][step], control value applied from that step
    std::vector<double> beta;
    std::uint64_t seed = 0;

    std::size_t steps() const { return times.size(); }
    double state(std::size_t path, std::size_t step, std::size_t dim = 0) const {
        return states[(path * steps() + step) * state_dim + dim];
    }
};

/// One Euler-Maruyama step from (t, x) with controls (a, b); the Gaussian
/// increment is derived from (seed, path, step). Writes into `out`.
void euler_step(const GameModel& model, double t, Point x, double alpha, double beta, double dt, std::uint64_t seed,
                std::uint64_t path, std::uint64_t step, std::span<double> out);

/// Euler-Maruyama ensemble on [t0, T] with nt steps. Throws NonFiniteState.
PathEnsemble simulate_paths(const GameModel& model, const SimulationStart& start, const ControlPolicy& policy,
                            std::size_t nt, std::size_t n_paths, std::uint64_t seed);

/// Empirical E[sup_s |X_s|^p] / (1 + |x0|^p) for p in {2, 4}.
double estimate_moment_bound(const PathEnsemble& ensemble, int p);

/// Columns: path, step, t, x, alpha, beta (x_0..x_{n-1} when n > 1).
void write_paths_csv(const PathEnsemble& ensemble, const std::filesystem::path& file);

/// Three-point upwind transition; targets j-1, j, j+1, reflected at the lattice
/// ends (j-1 -> 1 at node 0, j+1 -> nx-1 at node nx).
struct Stencil {
    double down = 0.0;
    double stay = 1.0;
    double up = 0.0;
};

/// Locally consistent controlled chain on a 1D lattice.
class MarkovChain {
public:
    MarkovChain() = default;

    const SpaceTimeGrid& grid() const { return grid_; }
    std::size_t control_count_a() const { return na_; }
    std::size_t control_count_b() const { return nb_; }
    bool homogeneous() const { return homogeneous_; }

    const Stencil& stencil(std::size_t level, std::size_t node, ControlIndex c) const {
        return stencils_[index(level, node, c)];
    }
    double drift(std::size_t level, std::size_t node, ControlIndex c) const { return drift_[index(level, node, c)]; }
    double sigma(std::size_t level, std::size_t node, ControlIndex c) const { return sigma_[index(level, node, c)]; }

    /// Down and up targets of a node after reflection at the lattice ends.
    std::pair<std::size_t, std::size_t> neighbours(std::size_t node) const {
        return {node == 0 ? 1 : node - 1, node == grid_.nx ? grid_.nx - 1 : node + 1};
    }

    /// E[v(X_{n+1}) | X_n = x_node] under control c.
    double expectation(std::size_t level, std::size_t node, ControlIndex c, std::span<const double> next) const {
        const Stencil& s = stencil(level, node, c);
        const auto [lo, hi] = neighbours(node);
        return s.down * next[lo] + s.stay * next[node] + s.up * next[hi];
    }

    /// Central-difference z = sigma (v_{j+1} - v_{j-1}) / (2 dx); zero at the ends.
    double z_estimate(std::size_t level, std::size_t node, ControlIndex c, std::span<const double> next) const {
        const auto [lo, hi] = neighbours(node);
        return sigma(level, node, c) * (next[hi] - next[lo]) / (2.0 * grid_.dx());
    }

    friend MarkovChain build_markov_chain(const GameModel& model, const SpaceTimeGrid& grid);

private:
    std::size_t index(std::size_t level, std::size_t node, ControlIndex c) const {
        const std::size_t slice = homogeneous_ ? 0 : level;
        return ((slice * grid_.nodes() + node) * na_ + c.a) * nb_ + c.b;
    }

    SpaceTimeGrid grid_;
    std::size_t na_ = 1;
    std::size_t nb_ = 1;
    bool homogeneous_ = true;
    std::vector<Stencil> stencils_;
    std::vector<double> drift_;
    std::vector<double> sigma_;
};

/// Upwind chain: p_up = s^2 dt/(2dx^2) + b+ dt/dx, p_down = s^2 dt/(2dx^2) + b- dt/dx,
/// p_stay = 1 - p_up - p_down. Throws CFLViolation if any probability leaves
/// [0, 1], DimensionUnsupported for n > 1 or d > 1.
MarkovChain build_markov_chain(const GameModel& model, const SpaceTimeGrid& grid);

}  // namespace isaacs
