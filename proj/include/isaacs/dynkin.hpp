#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "isaacs/dynamics.hpp"
#include "isaacs/grid.hpp"
#include "isaacs/model.hpp"

namespace isaacs {

enum class StopOwner { MaxPlayer, MinPlayer };  // sigma maximises, tau minimises

/// Stop (1) or continue (0) per (level, node); the last level always stops.
struct StoppingRule {
    StopOwner owner = StopOwner::MaxPlayer;
    LevelField<char> stop;

    static StoppingRule never(const SpaceTimeGrid& grid, StopOwner owner);
    /// Stops at levels < nt wherever region(t, x) holds.
    static StoppingRule from_region(const SpaceTimeGrid& grid, StopOwner owner,
                                    const std::function<bool(double t, double x)>& region);
    bool stops(std::size_t level, std::size_t node) const { return stop(level, node) != 0; }
};

/// Continuation operator: Additive gives E[V'] + phi dt; Exponential gives
/// ln E[exp V'] + phi dt (the risk-sensitive payoff).
enum class PayoffMode { Additive, Exponential };

/// Running cost per (level, node), barriers h < h', terminal g.
struct DynkinData {
    LevelField<double> running;
    LevelField<double> lower;
    LevelField<double> upper;
    std::vector<double> terminal;
};

/// Running cost phi at the policy's controls plus the model obstacles and g.
DynkinData dynkin_data(const GameModel& model, const SpaceTimeGrid& grid, const ChainPolicy& policy);

struct GameBounds {
    double inf_sup = 0.0;  // min over tau-rules of max over sigma-rules
    double sup_inf = 0.0;
};

struct DynkinValue {
    SpaceTimeGrid grid;
    LevelField<double> value;
    LevelField<Contact> flags;
    StoppingRule sigma_rule;
    StoppingRule tau_rule;
    std::optional<GameBounds> certificate;
};

/// V = clamp(continuation, h, h') backward from g; sigma stops at LOWER
/// contact, tau at UPPER contact. Throws BarrierOrderViolation,
/// TerminalOutsideBarriers.
DynkinValue dynkin_value(const MarkovChain& chain, const ChainPolicy& policy, const DynkinData& data,
                         PayoffMode mode = PayoffMode::Additive);

/// Value of the game under fixed rules: h when sigma stops first or together
/// with tau before T, h' when tau stops strictly first, g at T.
LevelField<double> stopped_value(const MarkovChain& chain, const ChainPolicy& policy, const DynkinData& data,
                                 const StoppingRule& sigma, const StoppingRule& tau, PayoffMode mode);

/// Exhaustive enumeration over stop regions reachable from `start_node`.
/// Throws TooLarge for more than 4 levels or 24 (level, node) pairs.
GameBounds brute_force_game_value(const MarkovChain& chain, const ChainPolicy& policy, const DynkinData& data,
                                  std::size_t start_node, PayoffMode mode = PayoffMode::Additive);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// Euler paths on the rule grid from (0, x0); Gamma sample is
/// exp(sum phi dt + payout) with the first-stop payout structure above.
MonteCarloEstimate risk_sensitive_payoff_mc(const GameModel& model, const ControlPolicy& controls,
                                            const StoppingRule& sigma, const StoppingRule& tau,
                                            const SpaceTimeGrid& grid, double x0, std::size_t n_paths,
                                            std::uint64_t seed);

struct ExponentialIdentityReport {
    double ln_gamma_mc = 0.0;
    double gamma_mc = 0.0;
    double gamma_std_error = 0.0;
    double y0_chain = 0.0;
    double gap = 0.0;        // ln Gamma_MC - Y0
    double tolerance = 0.0;  // 3 s.e. / Gamma + 5e-2
    bool pass = false;
};

/// Stopped risk-sensitive BSDE on the chain (exponential mode) against the
/// Monte Carlo payoff. Requires a RunningCost or RiskSensitive model.
ExponentialIdentityReport verify_exponential_identity(const GameModel& model, const ChainPolicy& controls,
                                                      const StoppingRule& sigma, const StoppingRule& tau,
                                                      const MarkovChain& chain, double x0, std::size_t n_paths,
                                                      std::uint64_t seed);

/// Columns: t, x, value, flag, sigma_stop, tau_stop.
void write_dynkin_csv(const DynkinValue& v, const std::filesystem::path& file);
std::string exponential_identity_json(const ExponentialIdentityReport& r);

}  // namespace isaacs
