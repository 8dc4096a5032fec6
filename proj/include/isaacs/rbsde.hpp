#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <vector>

#include "isaacs/dynamics.hpp"
#include "isaacs/grid.hpp"
#include "isaacs/model.hpp"
#include "isaacs/transforms.hpp"

namespace isaacs {

/// Generator with controls supplied by the chain policy at each node.
using DriverFn = std::function<double(double t, double x, double y, double z, ControlIndex c)>;

/// model.generator evaluated at the policy's control values.
DriverFn driver_from_model(const GameModel& model);
DriverFn driver_from_generator(GeneratorFn generator, std::vector<double> control_a, std::vector<double> control_b);

/// Terminal values and barriers on a grid.
struct BarrierData {
    std::vector<double> terminal;  // one per node
    LevelField<double> lower;      // levels 0..nt
    LevelField<double> upper;
};

BarrierData barrier_data(const GameModel& model, const SpaceTimeGrid& grid);

/// Y, Z per (level, node); dk_plus / dk_minus are the reflection increments
/// applied when stepping from level n+1 to level n (zero at the last level).
struct RBSDESolution {
    SpaceTimeGrid grid;
    LevelField<double> y;
    LevelField<double> z;
    LevelField<double> dk_plus;
    LevelField<double> dk_minus;
    LevelField<Contact> flags;
    LevelField<double> lower;
    LevelField<double> upper;
    double tol = 0.0;
};

/// Projected backward induction. Throws BarrierOrderViolation,
/// TerminalOutsideBarriers, StabilityBlowup.
RBSDESolution solve_rbsde_chain(const MarkovChain& chain, const ChainPolicy& policy, const DriverFn& driver,
                                const BarrierData& data);

/// Explicit penalized induction with driver F + lambda (L - Y)^+ - lambda (Y - U)^+
/// and no projection; dk_plus / dk_minus hold the penalty increments.
/// Throws StabilityBlowup when lambda dt > 1.
RBSDESolution solve_penalized(const MarkovChain& chain, const ChainPolicy& policy, const DriverFn& driver,
                              const BarrierData& data, double lambda);

/// Cumulative reflection along a node path (one node per level 0..nt); entry
/// k holds the total increments applied at levels < k.
struct ReflectionPath {
    std::vector<double> k_plus;
    std::vector<double> k_minus;
};
ReflectionPath cumulative_reflection(const RBSDESolution& sol, const std::vector<std::size_t>& node_path);

struct SkorokhodResiduals {
    double lower = 0.0;  // max |min(Y - L, dK+)|
    double upper = 0.0;  // max |min(U - Y, dK-)|
    bool within(double tol) const { return lower <= tol && upper <= tol; }
};

SkorokhodResiduals skorokhod_residuals(const RBSDESolution& sol);

struct ComparisonReport {
    double max_violation = 0.0;  // max of Y - Y' over all (level, node)
    std::size_t probes = 0;
    bool passed = false;
};

/// Probes F <= F' on grid nodes, y in [min L, max U] and |z| <= z_probe, then
/// solves both and checks Y <= Y' + tol. Throws HypothesisViolated.
ComparisonReport comparison_test(const MarkovChain& chain, const ChainPolicy& policy, const DriverFn& f,
                                 const DriverFn& f_prime, const BarrierData& data, double z_probe = 5.0,
                                 double tol = 1e-10);

/// Chain solves of the transformed problem with the decreasing generators f^p
/// and the increasing generators f_p, p = 1..p_max.
struct ApproximationChainResult {
    ApproximationSchedule schedule;
    std::vector<LevelField<double>> upper;  // upper[p - 1] solves with f^p
    std::vector<LevelField<double>> lower;  // lower[p - 1] solves with f_p
    std::vector<double> upper_step;         // max |Y^{p+1} - Y^p|, entry p - 1
    std::vector<double> lower_step;
    double upper_increase = 0.0;  // max over p and nodes of Y^{p+1} - Y^p
    double lower_decrease = 0.0;  // max over p and nodes of Y_p - Y_{p+1}
    double sandwich_gap = 0.0;    // min over nodes of Y^{p_max} - Y_{p_max}
};

ApproximationChainResult solve_approximation_chain(const TransformedModel& transformed, const MarkovChain& chain,
                                                   const ChainPolicy& policy, int p_max, std::uint64_t seed = 11);

/// Columns: t, x, Y, Z, K_plus, K_minus, flag (K columns are per-level increments).
void write_rbsde_csv(const RBSDESolution& sol, const std::filesystem::path& file);

}  // namespace isaacs
