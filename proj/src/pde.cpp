#include "isaacs/pde.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "isaacs/csv.hpp"
#include "isaacs/hamiltonian.hpp"
#include "isaacs/transforms.hpp"

namespace isaacs {

const char* to_string(Side side) { return side == Side::Lower ? "lower" : "upper"; }

double ValueField::interpolate(std::size_t level, double x) const {
    const double s = std::clamp((x - grid.x_min) / grid.dx(), 0.0, static_cast<double>(grid.nx));
    const auto j = std::min(static_cast<std::size_t>(std::floor(s)), grid.nx - 1);
    const double w = s - static_cast<double>(j);
    if (w == 0.0) return values(level, j);
    return (1.0 - w) * values(level, j) + w * values(level, j + 1);
}

namespace {

struct ObstacleRange {
    double lower_min = 0.0;
    double upper_max = 0.0;
    double bound = 0.0;
};

ObstacleRange obstacle_range(const GameModel& model, const SpaceTimeGrid& grid) {
    ObstacleRange r;
    r.lower_min = INFINITY;
    r.upper_max = -INFINITY;
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        const double x = grid.x(j);
        r.bound = std::max(r.bound, std::abs(model.terminal_at(x)));
        for (std::size_t n = 0; n < grid.levels(); ++n) {
            const double h = model.lower_at(grid.t(n), x);
            const double hp = model.upper_at(grid.t(n), x);
            r.lower_min = std::min(r.lower_min, h);
            r.upper_max = std::max(r.upper_max, hp);
            r.bound = std::max({r.bound, std::abs(h), std::abs(hp)});
        }
    }
    if (!std::isfinite(r.bound)) throw Error(ErrorKind::NonFiniteState, "non-finite terminal or obstacle data");
    return r;
}

double max_sigma(const GameModel& model, const SpaceTimeGrid& grid, std::size_t t_samples) {
    double s = 0.0;
    for (std::size_t k = 0; k < t_samples; ++k) {
        const double t = t_samples == 1 ? 0.0 : model.horizon * static_cast<double>(k) / (t_samples - 1);
        for (std::size_t j = 0; j < grid.nodes(); ++j)
            for (double a : model.control_grid_a)
                for (double b : model.control_grid_b) s = std::max(s, std::abs(model.diffusion_at(t, grid.x(j), a, b)));
    }
    return s;
}

}  // namespace

double data_bound(const GameModel& model, const SpaceTimeGrid& grid) { return obstacle_range(model, grid).bound; }

double default_z_cap(const GameModel& model, const SpaceTimeGrid& grid) {
    const double sigma = max_sigma(model, grid, model.time_homogeneous ? 1 : 3);
    const double cap = 2.0 * data_bound(model, grid) / grid.dx() * sigma;
    return cap > 0.0 ? cap : 1.0;
}

double cfl_timestep(const GameModel& model, const SpaceTimeGrid& grid, double z_cap) {
    if (!(z_cap > 0.0)) throw Error(ErrorKind::InvalidArgument, "z_cap must be positive");
    if (model.state_dim != 1 || model.noise_dim != 1) {
        throw Error(ErrorKind::DimensionUnsupported, "the PDE solver supports n = d = 1 only");
    }
    const std::size_t t_samples = model.time_homogeneous ? 1 : 3;
    const ObstacleRange range = obstacle_range(model, grid);
    const double dx = grid.dx();

    double sigma2 = 0.0;
    double drift = 0.0;
    for (std::size_t k = 0; k < t_samples; ++k) {
        const double t = t_samples == 1 ? 0.0 : model.horizon * static_cast<double>(k) / (t_samples - 1);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            for (double a : model.control_grid_a) {
                for (double b : model.control_grid_b) {
                    const double s = model.diffusion_at(t, grid.x(j), a, b);
                    sigma2 = std::max(sigma2, s * s);
                    drift = std::max(drift, std::abs(model.drift_at(t, grid.x(j), a, b)));
                }
            }
        }
    }

    // z-Lipschitz constant of F over y in [min h, max h'] where the scheme evaluates it.
    constexpr std::size_t z_points = 41;
    constexpr std::size_t y_points = 7;
    const std::size_t stride = std::max<std::size_t>(1, grid.nodes() / 50);
    const double t_probe[3] = {0.0, 0.5 * model.horizon, model.horizon};
    const std::size_t n_t = model.form == GeneratorForm::General ? 3 : 1;
    double lip = 0.0;
    const double dz = 2.0 * z_cap / (z_points - 1);
    for (std::size_t k = 0; k < n_t; ++k) {
        for (std::size_t j = 0; j < grid.nodes(); j += stride) {
            const double x = grid.x(j);
            for (std::size_t iy = 0; iy < y_points; ++iy) {
                const double y = range.lower_min +
                                 (range.upper_max - range.lower_min) * static_cast<double>(iy) / (y_points - 1);
                for (double a : model.control_grid_a) {
                    for (double b : model.control_grid_b) {
                        double prev = model.generator_at(t_probe[k], x, y, -z_cap, a, b);
                        for (std::size_t iz = 1; iz < z_points; ++iz) {
                            const double z = -z_cap + dz * static_cast<double>(iz);
                            const double cur = model.generator_at(t_probe[k], x, y, z, a, b);
                            lip = std::max(lip, std::abs(cur - prev) / dz);
                            prev = cur;
                        }
                    }
                }
            }
        }
    }
    if (!std::isfinite(lip)) throw Error(ErrorKind::NonFiniteState, "non-finite generator on the z probe");
    const double denom = sigma2 + dx * drift + dx * dx * lip;
    if (denom == 0.0) throw Error(ErrorKind::DegenerateModel, "no diffusion, drift or z-dependence: CFL bound undefined");
    return 0.9 * dx * dx / denom;
}

SpaceTimeGrid auto_cfl_grid(const GameModel& model, double x_min, double x_max, std::size_t nx,
                            std::optional<double> z_cap) {
    SpaceTimeGrid probe = SpaceTimeGrid::make(x_min, x_max, nx, 1, model.horizon);
    const double cap = z_cap ? *z_cap : default_z_cap(model, probe);
    const double dt = cfl_timestep(model, probe, cap);
    const auto nt = static_cast<std::size_t>(std::ceil(model.horizon / dt - 1e-12));
    return SpaceTimeGrid::make(x_min, x_max, nx, std::max<std::size_t>(nt, 1), model.horizon);
}

ValueField solve_double_obstacle(const GameModel& model, const SpaceTimeGrid& grid, Side side,
                                 const PdeOptions& options) {
    const MarkovChain chain = build_markov_chain(model, grid);
    const std::size_t nodes = grid.nodes();
    const std::size_t na = model.control_grid_a.size();
    const std::size_t nb = model.control_grid_b.size();
    const double dt = grid.dt();
    const double dx = grid.dx();

    ValueField field;
    field.grid = grid;
    field.side = side;
    field.values = LevelField<double>(grid.levels(), nodes);
    field.flags = LevelField<Contact>(grid.levels(), nodes);
    field.k_plus = LevelField<double>(grid.levels(), nodes);
    field.k_minus = LevelField<double>(grid.levels(), nodes);
    field.feedback = LevelField<ControlIndex>(grid.nt, nodes);
    field.data_bound = data_bound(model, grid);
    const double tol = 1e-9 * std::max(field.data_bound, 1.0);
    const double blowup = 10.0 * std::max(field.data_bound, 1.0);
    const double z_cap = options.z_cap ? *options.z_cap : default_z_cap(model, grid);

    LevelField<double> lower(grid.levels(), nodes), upper(grid.levels(), nodes);
    for (std::size_t n = 0; n < grid.levels(); ++n) {
        for (std::size_t j = 0; j < nodes; ++j) {
            lower(n, j) = model.lower_at(grid.t(n), grid.x(j));
            upper(n, j) = model.upper_at(grid.t(n), grid.x(j));
            if (!(lower(n, j) < upper(n, j))) {
                throw Error(ErrorKind::ObstacleOrderViolation,
                            "h >= h' at t = " + format_double(grid.t(n)) + ", x = " + format_double(grid.x(j)));
            }
        }
    }
    for (std::size_t j = 0; j < nodes; ++j) {
        const double g = model.terminal_at(grid.x(j));
        if (g < lower(grid.nt, j) || g > upper(grid.nt, j)) {
            throw Error(ErrorKind::TerminalSandwichViolation, "terminal value outside [h, h'] at x = " +
                                                                  format_double(grid.x(j)));
        }
        field.values(grid.nt, j) = g;
        field.flags(grid.nt, j) = classify_contact(g, lower(grid.nt, j), upper(grid.nt, j), tol);
    }

    std::vector<double> table(na * nb);
    for (std::size_t n = grid.nt; n-- > 0;) {
        const double t = grid.t(n);
        const auto next = field.values.level(n + 1);
        for (std::size_t j = 0; j < nodes; ++j) {
            const double x = grid.x(j);
            const NodeDifferences d = node_differences(next, j, dx);
            for (std::size_t ia = 0; ia < na; ++ia) {
                for (std::size_t ib = 0; ib < nb; ++ib) {
                    const ControlIndex c{ia, ib};
                    const double s = chain.sigma(n, j, c);
                    if (std::abs(s * d.central) > z_cap) {
                        throw Error(ErrorKind::StabilityBlowup, "realized |q sigma| = " +
                                                                    format_double(std::abs(s * d.central)) +
                                                                    " exceeds z_cap = " + format_double(z_cap));
                    }
                    table[ia * nb + ib] = discrete_inner(model, t, x, next[j], chain.drift(n, j, c), s, d,
                                                         model.control_grid_a[ia], model.control_grid_b[ib]);
                }
            }
            double h_value;
            ControlIndex saddle;
            if (side == Side::Lower) {
                const LowerHamiltonian lh = max_min(table, na, nb);
                h_value = lh.value;
                saddle = {lh.best_a, lh.best_b[lh.best_a]};
            } else {
                const UpperHamiltonian uh = min_max(table, na, nb);
                h_value = uh.value;
                saddle = {uh.best_a[uh.best_b], uh.best_b};
            }
            const double raw = next[j] + dt * h_value;
            if (!std::isfinite(raw) || std::abs(raw) > blowup) {
                throw Error(ErrorKind::StabilityBlowup, "value " + format_double(raw) + " at t = " + format_double(t) +
                                                            ", x = " + format_double(x) + " exceeds 10x the data bound");
            }
            const double h = lower(n, j);
            const double hp = upper(n, j);
            const double u = std::clamp(raw, h, hp);
            field.values(n, j) = u;
            field.k_plus(n, j) = std::max(h - raw, 0.0);
            field.k_minus(n, j) = std::max(raw - hp, 0.0);
            field.flags(n, j) = classify_contact(u, h, hp, tol);
            field.feedback(n, j) = saddle;
        }
    }
    return field;
}

ValueField solve_via_transform(const GameModel& model, const SpaceTimeGrid& grid, Side side,
                               const PdeOptions& options) {
    const TransformedModel tm = transform_data(model, grid);
    ValueField field = solve_double_obstacle(tm.model, grid, side, options);
    field.data_bound = data_bound(model, grid);
    const double tol = 1e-9 * std::max(field.data_bound, 1.0);
    const double c2 = 2.0 * tm.c;
    for (std::size_t n = 0; n < grid.levels(); ++n) {
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const double w = field.values(n, j);
            if (!(w > 0.0)) {
                throw Error(ErrorKind::NonpositiveTransformedValue,
                            "transformed value " + format_double(w) + " at level " + std::to_string(n));
            }
            const double h = model.lower_at(grid.t(n), grid.x(j));
            const double hp = model.upper_at(grid.t(n), grid.x(j));
            // Log of the clamped transformed value can miss [h, h'] by an ulp.
            const double u = std::clamp(std::log(w) / c2, h, hp);
            field.values(n, j) = u;
            field.k_plus(n, j) = field.k_plus(n, j) / (c2 * w);
            field.k_minus(n, j) = field.k_minus(n, j) / (c2 * w);
            field.flags(n, j) = classify_contact(u, h, hp, tol);
        }
    }
    for (std::size_t j = 0; j < grid.nodes(); ++j) field.values(grid.nt, j) = model.terminal_at(grid.x(j));
    return field;
}

double residual_check(const ValueField& field, const GameModel& model, const SpaceTimeGrid& grid, Side side) {
    const std::size_t na = model.control_grid_a.size();
    const std::size_t nb = model.control_grid_b.size();
    const double dt = grid.dt();
    const double dx = grid.dx();
    std::vector<double> table(na * nb);
    double worst = 0.0;
    for (std::size_t n = 0; n < grid.nt; ++n) {
        const double t = grid.t(n);
        const auto cur = field.values.level(n);
        for (std::size_t j = 1; j < grid.nx; ++j) {
            const double x = grid.x(j);
            const NodeDifferences d = node_differences(cur, j, dx);
            for (std::size_t ia = 0; ia < na; ++ia) {
                for (std::size_t ib = 0; ib < nb; ++ib) {
                    const double a = model.control_grid_a[ia];
                    const double b = model.control_grid_b[ib];
                    table[ia * nb + ib] = discrete_inner(model, t, x, cur[j], model.drift_at(t, x, a, b),
                                                         model.diffusion_at(t, x, a, b), d, a, b);
                }
            }
            const double h_value = side == Side::Lower ? max_min(table, na, nb).value : min_max(table, na, nb).value;
            const double u = cur[j];
            const double time_term = -(field.values(n + 1, j) - u) / dt;
            const double r = std::min(u - model.lower_at(t, x),
                                      std::max(time_term - h_value, u - model.upper_at(t, x)));
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

void write_value_csv(const ValueField& field, const std::filesystem::path& file) {
    CsvWriter csv(file, {"t", "x", "value", "flag", "k_plus", "k_minus"});
    const SpaceTimeGrid& g = field.grid;
    for (std::size_t n = 0; n < g.levels(); ++n) {
        for (std::size_t j = 0; j < g.nodes(); ++j) {
            csv.field(g.t(n)).field(g.x(j)).field(field.values(n, j)).field(std::string_view(to_string(field.flags(n, j))));
            csv.field(field.k_plus(n, j)).field(field.k_minus(n, j));
            csv.end_row();
        }
    }
}

void write_value_matrix(const ValueField& field, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + file.string());
    const SpaceTimeGrid& g = field.grid;
    out << "# t x value\n";
    for (std::size_t n = 0; n < g.levels(); ++n) {
        for (std::size_t j = 0; j < g.nodes(); ++j) {
            out << format_double(g.t(n)) << ' ' << format_double(g.x(j)) << ' ' << format_double(field.values(n, j))
                << '\n';
        }
        out << '\n';
    }
}

}  // namespace isaacs
