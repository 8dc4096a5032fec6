#include "isaacs/dynkin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isaacs/csv.hpp"
#include "isaacs/parallel.hpp"
#include "json.hpp"

namespace isaacs {

StoppingRule StoppingRule::never(const SpaceTimeGrid& grid, StopOwner owner) {
    return from_region(grid, owner, [](double, double) { return false; });
}

StoppingRule StoppingRule::from_region(const SpaceTimeGrid& grid, StopOwner owner,
                                       const std::function<bool(double t, double x)>& region) {
    StoppingRule r;
    r.owner = owner;
    r.stop = LevelField<char>(grid.levels(), grid.nodes(), 0);
    for (std::size_t n = 0; n < grid.levels(); ++n) {
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            r.stop(n, j) = (n == grid.nt || region(grid.t(n), grid.x(j))) ? 1 : 0;
        }
    }
    return r;
}

DynkinData dynkin_data(const GameModel& model, const SpaceTimeGrid& grid, const ChainPolicy& policy) {
    if (model.form == GeneratorForm::General || !model.running_cost) {
        throw Error(ErrorKind::InvalidArgument, "model '" + model.name + "' has no separate running cost");
    }
    DynkinData d;
    d.running = LevelField<double>(grid.levels(), grid.nodes());
    d.lower = LevelField<double>(grid.levels(), grid.nodes());
    d.upper = LevelField<double>(grid.levels(), grid.nodes());
    d.terminal.resize(grid.nodes());
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        const double x = grid.x(j);
        d.terminal[j] = model.terminal_at(x);
        for (std::size_t n = 0; n < grid.levels(); ++n) {
            d.lower(n, j) = model.lower_at(grid.t(n), x);
            d.upper(n, j) = model.upper_at(grid.t(n), x);
            if (n < grid.nt) {
                const ControlIndex c = policy.at(n, j);
                d.running(n, j) = model.running_at(grid.t(n), x, model.control_grid_a.at(c.a),
                                                   model.control_grid_b.at(c.b));
            }
        }
    }
    return d;
}

namespace {

void check_dynkin_data(const SpaceTimeGrid& grid, const DynkinData& data) {
    if (data.terminal.size() != grid.nodes() || data.lower.levels() != grid.levels() ||
        data.upper.levels() != grid.levels() || data.running.levels() != grid.levels() ||
        data.lower.nodes() != grid.nodes()) {
        throw Error(ErrorKind::InvalidArgument, "Dynkin data does not match the chain grid");
    }
    for (std::size_t n = 0; n < grid.levels(); ++n) {
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            if (!(data.lower(n, j) < data.upper(n, j))) {
                throw Error(ErrorKind::BarrierOrderViolation,
                            "h >= h' at level " + std::to_string(n) + ", node " + std::to_string(j));
            }
        }
    }
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        const double g = data.terminal[j];
        if (g < data.lower(grid.nt, j) || g > data.upper(grid.nt, j)) {
            throw Error(ErrorKind::TerminalOutsideBarriers, "g outside [h, h'] at node " + std::to_string(j));
        }
    }
}

double continuation(const MarkovChain& chain, ControlIndex c, std::size_t n, std::size_t j,
                    std::span<const double> next, double running, PayoffMode mode) {
    const double dt = chain.grid().dt();
    if (mode == PayoffMode::Additive) return chain.expectation(n, j, c, next) + running * dt;
    const Stencil& s = chain.stencil(n, j, c);
    const auto [lo, hi] = chain.neighbours(j);
    const double m = std::max({next[lo], next[j], next[hi]});
    const double e1 =
        s.down * std::expm1(next[lo] - m) + s.stay * std::expm1(next[j] - m) + s.up * std::expm1(next[hi] - m);
    return m + std::log1p(e1) + running * dt;
}

}  // namespace

DynkinValue dynkin_value(const MarkovChain& chain, const ChainPolicy& policy, const DynkinData& data,
                         PayoffMode mode) {
    const SpaceTimeGrid& grid = chain.grid();
    check_dynkin_data(grid, data);
    double bound = 0.0;
    for (double v : data.lower.raw()) bound = std::max(bound, std::abs(v));
    for (double v : data.upper.raw()) bound = std::max(bound, std::abs(v));
    const double tol = 1e-9 * std::max(bound, 1.0);

    DynkinValue out;
    out.grid = grid;
    out.value = LevelField<double>(grid.levels(), grid.nodes());
    out.flags = LevelField<Contact>(grid.levels(), grid.nodes());
    out.sigma_rule.owner = StopOwner::MaxPlayer;
    out.tau_rule.owner = StopOwner::MinPlayer;
    out.sigma_rule.stop = LevelField<char>(grid.levels(), grid.nodes(), 0);
    out.tau_rule.stop = LevelField<char>(grid.levels(), grid.nodes(), 0);
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        out.value(grid.nt, j) = data.terminal[j];
        out.flags(grid.nt, j) = classify_contact(data.terminal[j], data.lower(grid.nt, j), data.upper(grid.nt, j), tol);
        out.sigma_rule.stop(grid.nt, j) = 1;
        out.tau_rule.stop(grid.nt, j) = 1;
    }
    for (std::size_t n = grid.nt; n-- > 0;) {
        const auto next = out.value.level(n + 1);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const double cont = continuation(chain, policy.at(n, j), n, j, next, data.running(n, j), mode);
            const double v = std::clamp(cont, data.lower(n, j), data.upper(n, j));
            out.value(n, j) = v;
            out.flags(n, j) = classify_contact(v, data.lower(n, j), data.upper(n, j), tol);
            out.sigma_rule.stop(n, j) = out.flags(n, j) == Contact::Lower ? 1 : 0;
            out.tau_rule.stop(n, j) = out.flags(n, j) == Contact::Upper ? 1 : 0;
        }
    }
    return out;
}

LevelField<double> stopped_value(const MarkovChain& chain, const ChainPolicy& policy, const DynkinData& data,
                                 const StoppingRule& sigma, const StoppingRule& tau, PayoffMode mode) {
    const SpaceTimeGrid& grid = chain.grid();
    check_dynkin_data(grid, data);
    LevelField<double> w(grid.levels(), grid.nodes());
    for (std::size_t j = 0; j < grid.nodes(); ++j) w(grid.nt, j) = data.terminal[j];
    for (std::size_t n = grid.nt; n-- > 0;) {
        const auto next = w.level(n + 1);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            if (sigma.stops(n, j)) {
                w(n, j) = data.lower(n, j);
            } else if (tau.stops(n, j)) {
                w(n, j) = data.upper(n, j);
            } else {
                w(n, j) = continuation(chain, policy.at(n, j), n, j, next, data.running(n, j), mode);
            }
        }
    }
    return w;
}

GameBounds brute_force_game_value(const MarkovChain& chain, const ChainPolicy& policy, const DynkinData& data,
                                  std::size_t start_node, PayoffMode mode) {
    const SpaceTimeGrid& grid = chain.grid();
    if (grid.levels() > 4 || grid.levels() * grid.nodes() > 24) {
        throw Error(ErrorKind::TooLarge, "brute force needs <= 4 levels and <= 24 (level, node) pairs, got " +
                                             std::to_string(grid.levels()) + " x " + std::to_string(grid.nodes()));
    }
    if (start_node >= grid.nodes()) throw Error(ErrorKind::InvalidArgument, "start node outside the grid");
    check_dynkin_data(grid, data);

    // Decision points: non-terminal (level, node) pairs reachable from the start.
    std::vector<std::pair<std::size_t, std::size_t>> points;
    std::vector<char> reach(grid.nodes(), 0);
    reach[start_node] = 1;
    for (std::size_t n = 0; n < grid.nt; ++n) {
        std::vector<char> next(grid.nodes(), 0);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            if (!reach[j]) continue;
            points.emplace_back(n, j);
            next[j] = 1;
            if (j > 0) next[j - 1] = 1;
            if (j < grid.nx) next[j + 1] = 1;
        }
        reach = std::move(next);
    }
    const std::size_t m = points.size();
    const std::size_t rules = std::size_t{1} << m;

    std::vector<double> payoff(rules * rules);
    std::vector<double> w(grid.levels() * grid.nodes(), 0.0);
    const std::size_t nodes = grid.nodes();
    for (std::size_t s = 0; s < rules; ++s) {
        for (std::size_t t = 0; t < rules; ++t) {
            for (std::size_t j = 0; j < nodes; ++j) w[grid.nt * nodes + j] = data.terminal[j];
            // points are ordered by level, so walk them backwards
            for (std::size_t k = m; k-- > 0;) {
                const auto [n, j] = points[k];
                double v;
                if ((s >> k) & 1U) {
                    v = data.lower(n, j);
                } else if ((t >> k) & 1U) {
                    v = data.upper(n, j);
                } else {
                    const std::span<const double> next(w.data() + (n + 1) * nodes, nodes);
                    v = continuation(chain, policy.at(n, j), n, j, next, data.running(n, j), mode);
                }
                w[n * nodes + j] = v;
            }
            payoff[s * rules + t] = w[start_node];
        }
    }
    GameBounds b;
    b.inf_sup = INFINITY;
    for (std::size_t t = 0; t < rules; ++t) {
        double best = -INFINITY;
        for (std::size_t s = 0; s < rules; ++s) best = std::max(best, payoff[s * rules + t]);
        b.inf_sup = std::min(b.inf_sup, best);
    }
    b.sup_inf = -INFINITY;
    for (std::size_t s = 0; s < rules; ++s) {
        double worst = INFINITY;
        for (std::size_t t = 0; t < rules; ++t) worst = std::min(worst, payoff[s * rules + t]);
        b.sup_inf = std::max(b.sup_inf, worst);
    }
    return b;
}

MonteCarloEstimate risk_sensitive_payoff_mc(const GameModel& model, const ControlPolicy& controls,
                                            const StoppingRule& sigma, const StoppingRule& tau,
                                            const SpaceTimeGrid& grid, double x0, std::size_t n_paths,
                                            std::uint64_t seed) {
    if (model.form == GeneratorForm::General || !model.running_cost) {
        throw Error(ErrorKind::InvalidArgument, "model '" + model.name + "' has no separate running cost");
    }
    if (model.state_dim != 1 || model.noise_dim != 1) {
        throw Error(ErrorKind::DimensionUnsupported, "risk-sensitive Monte Carlo supports n = d = 1 only");
    }
    if (n_paths < 2) throw Error(ErrorKind::InvalidArgument, "need at least two paths");
    const double dt = grid.dt();
    std::vector<double> samples(n_paths);
    std::vector<char> failed(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t p) {
        double x = x0;
        double acc = 0.0;
        double payout = 0.0;
        bool stopped = false;
        for (std::size_t n = 0; n < grid.nt; ++n) {
            const double t = grid.t(n);
            const std::size_t node = grid.nearest_node(x);
            if (sigma.stops(n, node)) {
                payout = model.lower_at(t, x);
                stopped = true;
                break;
            }
            if (tau.stops(n, node)) {
                payout = model.upper_at(t, x);
                stopped = true;
                break;
            }
            const ControlIndex c = controls(t, Point(&x, 1));
            const double a = model.control_grid_a.at(c.a);
            const double b = model.control_grid_b.at(c.b);
            acc += model.running_at(t, x, a, b) * dt;
            double next = 0.0;
            euler_step(model, t, Point(&x, 1), a, b, dt, seed, p, n, std::span<double>(&next, 1));
            x = next;
            if (!std::isfinite(x)) {
                failed[p] = 1;
                return;
            }
        }
        if (!stopped) payout = model.terminal_at(x);
        samples[p] = std::exp(acc + payout);
    });
    for (std::size_t p = 0; p < n_paths; ++p) {
        if (failed[p]) throw Error(ErrorKind::NonFiniteState, "path " + std::to_string(p) + " diverged");
    }
    // Shifted by the first sample so that a constant payout has an exact mean.
    const double ref = samples.front();
    double sum = 0.0;
    for (double v : samples) sum += v - ref;
    const double mean = ref + sum / static_cast<double>(n_paths);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    MonteCarloEstimate est;
    est.mean = mean;
    est.n_paths = n_paths;
    est.std_error = std::sqrt(ss / static_cast<double>(n_paths - 1) / static_cast<double>(n_paths));
    return est;
}

ExponentialIdentityReport verify_exponential_identity(const GameModel& model, const ChainPolicy& controls,
                                                      const StoppingRule& sigma, const StoppingRule& tau,
                                                      const MarkovChain& chain, double x0, std::size_t n_paths,
                                                      std::uint64_t seed) {
    const SpaceTimeGrid& grid = chain.grid();
    const DynkinData data = dynkin_data(model, grid, controls);
    const LevelField<double> w = stopped_value(chain, controls, data, sigma, tau, PayoffMode::Exponential);

    ExponentialIdentityReport r;
    const double s = std::clamp((x0 - grid.x_min) / grid.dx(), 0.0, static_cast<double>(grid.nx));
    const auto j = std::min(static_cast<std::size_t>(std::floor(s)), grid.nx - 1);
    const double frac = s - static_cast<double>(j);
    r.y0_chain = frac == 0.0 ? w(0, j) : (1.0 - frac) * w(0, j) + frac * w(0, j + 1);

    const MonteCarloEstimate mc =
        risk_sensitive_payoff_mc(model, controls.as_feedback(grid), sigma, tau, grid, x0, n_paths, seed);
    r.gamma_mc = mc.mean;
    r.gamma_std_error = mc.std_error;
    r.ln_gamma_mc = std::log(mc.mean);
    r.gap = r.ln_gamma_mc - r.y0_chain;
    r.tolerance = 3.0 * mc.std_error / mc.mean + 5e-2;
    r.pass = std::abs(r.gap) <= r.tolerance;
    return r;
}

void write_dynkin_csv(const DynkinValue& v, const std::filesystem::path& file) {
    CsvWriter csv(file, {"t", "x", "value", "flag", "sigma_stop", "tau_stop"});
    const SpaceTimeGrid& g = v.grid;
    for (std::size_t n = 0; n < g.levels(); ++n) {
        for (std::size_t j = 0; j < g.nodes(); ++j) {
            csv.field(g.t(n)).field(g.x(j)).field(v.value(n, j)).field(std::string_view(to_string(v.flags(n, j))));
            csv.field(static_cast<long long>(v.sigma_rule.stop(n, j))).field(static_cast<long long>(v.tau_rule.stop(n, j)));
            csv.end_row();
        }
    }
}

std::string exponential_identity_json(const ExponentialIdentityReport& r) {
    nlohmann::json j = {{"ln_gamma_mc", r.ln_gamma_mc}, {"gamma_mc", r.gamma_mc},
                        {"gamma_std_error", r.gamma_std_error}, {"y0_chain", r.y0_chain},
                        {"gap", r.gap}, {"tolerance", r.tolerance}, {"pass", r.pass}};
    return j.dump(2);
}

}  // namespace isaacs
