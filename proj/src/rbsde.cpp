#include "isaacs/rbsde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isaacs/csv.hpp"

namespace isaacs {

DriverFn driver_from_model(const GameModel& model) {
    return driver_from_generator(model.generator, model.control_grid_a, model.control_grid_b);
}

DriverFn driver_from_generator(GeneratorFn generator, std::vector<double> control_a, std::vector<double> control_b) {
    return [f = std::move(generator), ca = std::move(control_a), cb = std::move(control_b)](
               double t, double x, double y, double z, ControlIndex c) {
        return f(t, Point(&x, 1), y, Point(&z, 1), ca.at(c.a), cb.at(c.b));
    };
}

BarrierData barrier_data(const GameModel& model, const SpaceTimeGrid& grid) {
    BarrierData d;
    d.terminal.resize(grid.nodes());
    d.lower = LevelField<double>(grid.levels(), grid.nodes());
    d.upper = LevelField<double>(grid.levels(), grid.nodes());
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        d.terminal[j] = model.terminal_at(grid.x(j));
        for (std::size_t n = 0; n < grid.levels(); ++n) {
            d.lower(n, j) = model.lower_at(grid.t(n), grid.x(j));
            d.upper(n, j) = model.upper_at(grid.t(n), grid.x(j));
        }
    }
    return d;
}

namespace {

double check_data(const SpaceTimeGrid& grid, const BarrierData& data) {
    if (data.terminal.size() != grid.nodes() || data.lower.levels() != grid.levels() ||
        data.lower.nodes() != grid.nodes() || data.upper.levels() != grid.levels() ||
        data.upper.nodes() != grid.nodes()) {
        throw Error(ErrorKind::InvalidArgument, "barrier data does not match the chain grid");
    }
    double bound = 0.0;
    for (std::size_t n = 0; n < grid.levels(); ++n) {
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            if (!(data.lower(n, j) < data.upper(n, j))) {
                throw Error(ErrorKind::BarrierOrderViolation,
                            "L >= U at level " + std::to_string(n) + ", node " + std::to_string(j));
            }
            bound = std::max({bound, std::abs(data.lower(n, j)), std::abs(data.upper(n, j))});
        }
    }
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        const double g = data.terminal[j];
        if (g < data.lower(grid.nt, j) || g > data.upper(grid.nt, j)) {
            throw Error(ErrorKind::TerminalOutsideBarriers, "terminal value " + format_double(g) +
                                                                " outside [L, U] at node " + std::to_string(j));
        }
        bound = std::max(bound, std::abs(g));
    }
    return bound;
}

RBSDESolution start_solution(const SpaceTimeGrid& grid, const BarrierData& data, double bound) {
    RBSDESolution sol;
    sol.grid = grid;
    sol.y = LevelField<double>(grid.levels(), grid.nodes());
    sol.z = LevelField<double>(grid.levels(), grid.nodes());
    sol.dk_plus = LevelField<double>(grid.levels(), grid.nodes());
    sol.dk_minus = LevelField<double>(grid.levels(), grid.nodes());
    sol.flags = LevelField<Contact>(grid.levels(), grid.nodes());
    sol.lower = data.lower;
    sol.upper = data.upper;
    sol.tol = 1e-9 * std::max(bound, 1.0);
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        sol.y(grid.nt, j) = data.terminal[j];
        sol.flags(grid.nt, j) = classify_contact(data.terminal[j], data.lower(grid.nt, j), data.upper(grid.nt, j), sol.tol);
    }
    return sol;
}

void check_finite(double v, double limit, const SpaceTimeGrid& grid, std::size_t n, std::size_t j) {
    if (!std::isfinite(v) || std::abs(v) > limit) {
        throw Error(ErrorKind::StabilityBlowup, "Y = " + format_double(v) + " at t = " + format_double(grid.t(n)) +
                                                    ", x = " + format_double(grid.x(j)));
    }
}

}  // namespace

RBSDESolution solve_rbsde_chain(const MarkovChain& chain, const ChainPolicy& policy, const DriverFn& driver,
                                const BarrierData& data) {
    const SpaceTimeGrid& grid = chain.grid();
    const double bound = check_data(grid, data);
    RBSDESolution sol = start_solution(grid, data, bound);
    const double dt = grid.dt();
    const double limit = 10.0 * std::max(bound, 1.0);
    for (std::size_t n = grid.nt; n-- > 0;) {
        const double t = grid.t(n);
        const auto next = sol.y.level(n + 1);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const ControlIndex c = policy.at(n, j);
            const double z = chain.z_estimate(n, j, c, next);
            const double raw = chain.expectation(n, j, c, next) + dt * driver(t, grid.x(j), next[j], z, c);
            check_finite(raw, limit, grid, n, j);
            const double lo = data.lower(n, j);
            const double hi = data.upper(n, j);
            const double y = std::clamp(raw, lo, hi);
            sol.y(n, j) = y;
            sol.z(n, j) = z;
            sol.dk_plus(n, j) = std::max(lo - raw, 0.0);
            sol.dk_minus(n, j) = std::max(raw - hi, 0.0);
            sol.flags(n, j) = classify_contact(y, lo, hi, sol.tol);
        }
    }
    return sol;
}

RBSDESolution solve_penalized(const MarkovChain& chain, const ChainPolicy& policy, const DriverFn& driver,
                              const BarrierData& data, double lambda) {
    const SpaceTimeGrid& grid = chain.grid();
    if (!(lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "penalty must be nonnegative");
    const double dt = grid.dt();
    if (lambda * dt > 1.0) {
        throw Error(ErrorKind::StabilityBlowup, "explicit penalization needs lambda dt <= 1, got " +
                                                    format_double(lambda * dt));
    }
    const double bound = check_data(grid, data);
    RBSDESolution sol = start_solution(grid, data, bound);
    const double limit = 10.0 * std::max(bound, 1.0) + 10.0;
    for (std::size_t n = grid.nt; n-- > 0;) {
        const double t = grid.t(n);
        const auto next = sol.y.level(n + 1);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const ControlIndex c = policy.at(n, j);
            const double z = chain.z_estimate(n, j, c, next);
            const double lo = data.lower(n, j);
            const double hi = data.upper(n, j);
            const double push_up = dt * lambda * std::max(lo - next[j], 0.0);
            const double push_down = dt * lambda * std::max(next[j] - hi, 0.0);
            const double y =
                chain.expectation(n, j, c, next) + dt * driver(t, grid.x(j), next[j], z, c) + push_up - push_down;
            check_finite(y, limit, grid, n, j);
            sol.y(n, j) = y;
            sol.z(n, j) = z;
            sol.dk_plus(n, j) = push_up;
            sol.dk_minus(n, j) = push_down;
            sol.flags(n, j) = classify_contact(y, lo, hi, sol.tol);
        }
    }
    return sol;
}

ReflectionPath cumulative_reflection(const RBSDESolution& sol, const std::vector<std::size_t>& node_path) {
    const SpaceTimeGrid& grid = sol.grid;
    if (node_path.size() != grid.levels()) {
        throw Error(ErrorKind::InvalidArgument, "node path needs one node per level");
    }
    ReflectionPath out;
    out.k_plus.assign(grid.levels(), 0.0);
    out.k_minus.assign(grid.levels(), 0.0);
    for (std::size_t n = 0; n < grid.nt; ++n) {
        const std::size_t j = node_path[n];
        if (j >= grid.nodes()) throw Error(ErrorKind::InvalidArgument, "node index outside the grid");
        out.k_plus[n + 1] = out.k_plus[n] + sol.dk_plus(n, j);
        out.k_minus[n + 1] = out.k_minus[n] + sol.dk_minus(n, j);
    }
    return out;
}

SkorokhodResiduals skorokhod_residuals(const RBSDESolution& sol) {
    SkorokhodResiduals r;
    for (std::size_t n = 0; n < sol.grid.levels(); ++n) {
        for (std::size_t j = 0; j < sol.grid.nodes(); ++j) {
            const double y = sol.y(n, j);
            r.lower = std::max(r.lower, std::abs(std::min(y - sol.lower(n, j), sol.dk_plus(n, j))));
            r.upper = std::max(r.upper, std::abs(std::min(sol.upper(n, j) - y, sol.dk_minus(n, j))));
        }
    }
    return r;
}

ComparisonReport comparison_test(const MarkovChain& chain, const ChainPolicy& policy, const DriverFn& f,
                                 const DriverFn& f_prime, const BarrierData& data, double z_probe, double tol) {
    const SpaceTimeGrid& grid = chain.grid();
    check_data(grid, data);
    double y_lo = INFINITY;
    double y_hi = -INFINITY;
    for (double v : data.lower.raw()) y_lo = std::min(y_lo, v);
    for (double v : data.upper.raw()) y_hi = std::max(y_hi, v);

    ComparisonReport report;
    constexpr std::size_t y_points = 9;
    constexpr std::size_t z_points = 11;
    const std::size_t level_stride = std::max<std::size_t>(1, grid.nt / 8);
    for (std::size_t n = 0; n < grid.nt; n += level_stride) {
        const double t = grid.t(n);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const ControlIndex c = policy.at(n, j);
            for (std::size_t iy = 0; iy < y_points; ++iy) {
                const double y = y_lo + (y_hi - y_lo) * static_cast<double>(iy) / (y_points - 1);
                for (std::size_t iz = 0; iz < z_points; ++iz) {
                    const double z = -z_probe + 2.0 * z_probe * static_cast<double>(iz) / (z_points - 1);
                    ++report.probes;
                    const double a = f(t, grid.x(j), y, z, c);
                    const double b = f_prime(t, grid.x(j), y, z, c);
                    if (a > b) {
                        throw Error(ErrorKind::HypothesisViolated,
                                    "F > F' at t = " + format_double(t) + ", x = " + format_double(grid.x(j)) +
                                        ", y = " + format_double(y) + ", z = " + format_double(z));
                    }
                }
            }
        }
    }
    const RBSDESolution s1 = solve_rbsde_chain(chain, policy, f, data);
    const RBSDESolution s2 = solve_rbsde_chain(chain, policy, f_prime, data);
    report.max_violation = -INFINITY;
    for (std::size_t k = 0; k < s1.y.raw().size(); ++k) {
        report.max_violation = std::max(report.max_violation, s1.y.raw()[k] - s2.y.raw()[k]);
    }
    report.passed = report.max_violation <= tol;
    return report;
}

ApproximationChainResult solve_approximation_chain(const TransformedModel& transformed, const MarkovChain& chain,
                                                   const ChainPolicy& policy, int p_max, std::uint64_t seed) {
    const GameModel& m = transformed.model;
    const SpaceTimeGrid& grid = chain.grid();
    const GeneratorFn f_tilde = cutoff_generator(m.generator, transformed.c, transformed.m_bound);
    ApproximationChainResult out;
    out.schedule = make_approximation_schedule(f_tilde, approximation_domain(transformed), p_max, seed);
    const BarrierData data = barrier_data(m, grid);
    for (int p = 1; p <= p_max; ++p) {
        for (ApproxDirection dir : {ApproxDirection::Upper, ApproxDirection::Lower}) {
            const GeneratorFn fp = build_lipschitz_approximation(f_tilde, out.schedule, p, dir);
            const DriverFn driver = driver_from_generator(fp, m.control_grid_a, m.control_grid_b);
            auto& target = dir == ApproxDirection::Upper ? out.upper : out.lower;
            target.push_back(solve_rbsde_chain(chain, policy, driver, data).y);
        }
    }
    out.upper_increase = -INFINITY;
    out.lower_decrease = -INFINITY;
    for (std::size_t k = 0; k + 1 < out.upper.size(); ++k) {
        double step_u = 0.0, step_l = 0.0;
        for (std::size_t i = 0; i < out.upper[k].raw().size(); ++i) {
            const double du = out.upper[k + 1].raw()[i] - out.upper[k].raw()[i];
            const double dl = out.lower[k + 1].raw()[i] - out.lower[k].raw()[i];
            out.upper_increase = std::max(out.upper_increase, du);
            out.lower_decrease = std::max(out.lower_decrease, -dl);
            step_u = std::max(step_u, std::abs(du));
            step_l = std::max(step_l, std::abs(dl));
        }
        out.upper_step.push_back(step_u);
        out.lower_step.push_back(step_l);
    }
    out.sandwich_gap = INFINITY;
    for (std::size_t i = 0; i < out.upper.back().raw().size(); ++i) {
        out.sandwich_gap = std::min(out.sandwich_gap, out.upper.back().raw()[i] - out.lower.back().raw()[i]);
    }
    return out;
}

void write_rbsde_csv(const RBSDESolution& sol, const std::filesystem::path& file) {
    CsvWriter csv(file, {"t", "x", "Y", "Z", "K_plus", "K_minus", "flag"});
    const SpaceTimeGrid& g = sol.grid;
    for (std::size_t n = 0; n < g.levels(); ++n) {
        for (std::size_t j = 0; j < g.nodes(); ++j) {
            csv.field(g.t(n)).field(g.x(j)).field(sol.y(n, j)).field(sol.z(n, j));
            csv.field(sol.dk_plus(n, j)).field(sol.dk_minus(n, j)).field(std::string_view(to_string(sol.flags(n, j))));
            csv.end_row();
        }
    }
}

}  // namespace isaacs
