#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "isaacs/dynamics.hpp"
#include "isaacs/grid.hpp"
#include "isaacs/model.hpp"

namespace isaacs {

enum class Side { Lower, Upper };

const char* to_string(Side side);

/// Solution of one double-obstacle Isaacs equation on a grid. `k_plus` and
/// `k_minus` hold the clamp corrections of the projection step; `feedback`
/// holds the saddle control indices chosen at levels 0..nt-1.
struct ValueField {
    SpaceTimeGrid grid;
    Side side = Side::Lower;
    LevelField<double> values;
    LevelField<Contact> flags;
    LevelField<double> k_plus;
    LevelField<double> k_minus;
    LevelField<ControlIndex> feedback;
    double data_bound = 0.0;

    /// Linear interpolation of level n at x (clamped to the lattice).
    double interpolate(std::size_t level, double x) const;
    ChainPolicy saddle_policy() const { return ChainPolicy(feedback); }
};

struct PdeOptions {
    std::optional<double> z_cap;  // default 2 * data bound / dx * max sigma
};

/// max |g|, |h|, |h'| over the grid nodes and levels.
double data_bound(const GameModel& model, const SpaceTimeGrid& grid);

/// 2 * data bound / dx * max sigma.
double default_z_cap(const GameModel& model, const SpaceTimeGrid& grid);

/// dt = 0.9 dx^2 / (max sigma^2 + dx max|b| + dx^2 L_F) with L_F the probed
/// z-Lipschitz constant of F on |z| <= z_cap. Throws DegenerateModel.
double cfl_timestep(const GameModel& model, const SpaceTimeGrid& grid, double z_cap);

/// Grid on [x_min, x_max] with nt = ceil(T / cfl_timestep).
SpaceTimeGrid auto_cfl_grid(const GameModel& model, double x_min, double x_max, std::size_t nx,
                            std::optional<double> z_cap = std::nullopt);

/// Projected explicit scheme, backward from g at level nt. Throws
/// CFLViolation, ObstacleOrderViolation, TerminalSandwichViolation,
/// StabilityBlowup.
ValueField solve_double_obstacle(const GameModel& model, const SpaceTimeGrid& grid, Side side,
                                 const PdeOptions& options = {});

/// Solves the exponentially transformed problem and maps back with
/// ln(w) / (2C). Throws NonpositiveTransformedValue.
ValueField solve_via_transform(const GameModel& model, const SpaceTimeGrid& grid, Side side,
                               const PdeOptions& options = {});

/// Max over interior (level, node) of |min{u - h, max{-du/dt - H, u - h'}}|,
/// with H evaluated by the solver's discrete operator at the current level.
double residual_check(const ValueField& field, const GameModel& model, const SpaceTimeGrid& grid, Side side);

/// Columns: t, x, value, flag, k_plus, k_minus.
void write_value_csv(const ValueField& field, const std::filesystem::path& file);

/// gnuplot splot blocks "t x value", one block per level separated by blank lines.
void write_value_matrix(const ValueField& field, const std::filesystem::path& file);

}  // namespace isaacs
