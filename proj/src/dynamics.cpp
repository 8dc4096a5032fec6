#include "isaacs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isaacs/csv.hpp"
#include "isaacs/parallel.hpp"
#include "isaacs/random.hpp"

namespace isaacs {

ControlPolicy constant_policy(ControlIndex index) {
    return [index](double, Point) { return index; };
}

ChainPolicy ChainPolicy::constant(const SpaceTimeGrid& grid, ControlIndex index) {
    return ChainPolicy(LevelField<ControlIndex>(grid.nt, grid.nodes(), index));
}

ChainPolicy ChainPolicy::from_feedback(const SpaceTimeGrid& grid, const ControlPolicy& policy) {
    LevelField<ControlIndex> table(grid.nt, grid.nodes());
    for (std::size_t n = 0; n < grid.nt; ++n) {
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const double x = grid.x(j);
            table(n, j) = policy(grid.t(n), Point(&x, 1));
        }
    }
    return ChainPolicy(std::move(table));
}

ControlPolicy ChainPolicy::as_feedback(const SpaceTimeGrid& grid) const {
    return [table = table_, grid](double t, Point x) {
        const std::size_t level = std::min(grid.level_of(t), grid.nt - 1);
        return table(level, grid.nearest_node(x[0]));
    };
}

void euler_step(const GameModel& model, double t, Point x, double alpha, double beta, double dt, std::uint64_t seed,
                std::uint64_t path, std::uint64_t step, std::span<double> out) {
    const std::size_t n = model.state_dim;
    const std::size_t d = model.noise_dim;
    double drift_buf[8];
    double sigma_buf[64];
    std::vector<double> drift_heap, sigma_heap;
    std::span<double> b(drift_buf, n);
    std::span<double> s(sigma_buf, n * d);
    if (n > 8 || n * d > 64) {
        drift_heap.resize(n);
        sigma_heap.resize(n * d);
        b = drift_heap;
        s = sigma_heap;
    }
    model.drift(t, x, alpha, beta, b);
    model.diffusion(t, x, alpha, beta, s);
    const double sqdt = std::sqrt(dt);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + b[i] * dt;
    for (std::size_t k = 0; k < d; ++k) {
        const double dw = sqdt * counter_normal(seed, path, step, k);
        for (std::size_t i = 0; i < n; ++i) out[i] += s[i * d + k] * dw;
    }
}

PathEnsemble simulate_paths(const GameModel& model, const SimulationStart& start, const ControlPolicy& policy,
                            std::size_t nt, std::size_t n_paths, std::uint64_t seed) {
    if (nt < 1 || n_paths < 1) throw Error(ErrorKind::InvalidArgument, "simulate_paths needs nt >= 1 and n_paths >= 1");
    const std::size_t n = model.state_dim;
    if (start.x0.size() != n) throw Error(ErrorKind::InvalidArgument, "start point dimension mismatch");

    PathEnsemble e;
    e.n_paths = n_paths;
    e.state_dim = n;
    e.seed = seed;
    e.times.resize(nt + 1);
    const double dt = (model.horizon - start.t0) / static_cast<double>(nt);
    for (std::size_t k = 0; k <= nt; ++k) e.times[k] = start.t0 + static_cast<double>(k) * dt;
    e.times[nt] = model.horizon;
    e.states.assign(n_paths * (nt + 1) * n, 0.0);
    e.alpha.assign(n_paths * (nt + 1), 0.0);
    e.beta.assign(n_paths * (nt + 1), 0.0);

    std::vector<char> failed(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t p) {
        double* row = e.states.data() + p * (nt + 1) * n;
        std::copy(start.x0.begin(), start.x0.end(), row);
        for (std::size_t k = 0; k <= nt; ++k) {
            const Point x(row + k * n, n);
            const ControlIndex c = policy(e.times[k], x);
            const double a = model.control_grid_a.at(c.a);
            const double b = model.control_grid_b.at(c.b);
            e.alpha[p * (nt + 1) + k] = a;
            e.beta[p * (nt + 1) + k] = b;
            if (k == nt) break;
            std::span<double> next(row + (k + 1) * n, n);
            euler_step(model, e.times[k], x, a, b, dt, seed, p, k, next);
            if (!std::all_of(next.begin(), next.end(), [](double v) { return std::isfinite(v); })) {
                failed[p] = 1;
                return;
            }
        }
    });
    for (std::size_t p = 0; p < n_paths; ++p) {
        if (failed[p]) throw Error(ErrorKind::NonFiniteState, "path " + std::to_string(p) + " left the finite range");
    }
    return e;
}

double estimate_moment_bound(const PathEnsemble& e, int p) {
    if (p != 2 && p != 4) throw Error(ErrorKind::InvalidArgument, "moment order must be 2 or 4");
    if (e.n_paths == 0) throw Error(ErrorKind::InvalidArgument, "empty ensemble");
    auto norm_pow = [&](std::size_t path, std::size_t step) {
        double s = 0.0;
        for (std::size_t i = 0; i < e.state_dim; ++i) s += e.state(path, step, i) * e.state(path, step, i);
        return p == 2 ? s : s * s;
    };
    double total = 0.0;
    for (std::size_t path = 0; path < e.n_paths; ++path) {
        double sup = 0.0;
        for (std::size_t k = 0; k < e.steps(); ++k) sup = std::max(sup, norm_pow(path, k));
        total += sup;
    }
    const double mean = total / static_cast<double>(e.n_paths);
    return mean / (1.0 + norm_pow(0, 0));
}

void write_paths_csv(const PathEnsemble& e, const std::filesystem::path& file) {
    if (e.state_dim == 1) {
        CsvWriter csv(file, {"path", "step", "t", "x", "alpha", "beta"});
        for (std::size_t p = 0; p < e.n_paths; ++p) {
            for (std::size_t k = 0; k < e.steps(); ++k) {
                csv.field(static_cast<long long>(p)).field(static_cast<long long>(k)).field(e.times[k]);
                csv.field(e.state(p, k)).field(e.alpha[p * e.steps() + k]).field(e.beta[p * e.steps() + k]);
                csv.end_row();
            }
        }
        return;
    }
    std::vector<std::string> names{"path", "step", "t"};
    for (std::size_t i = 0; i < e.state_dim; ++i) names.push_back("x_" + std::to_string(i));
    names.emplace_back("alpha");
    names.emplace_back("beta");
    CsvWriter csv(file, names);
    for (std::size_t p = 0; p < e.n_paths; ++p) {
        for (std::size_t k = 0; k < e.steps(); ++k) {
            csv.field(static_cast<long long>(p)).field(static_cast<long long>(k)).field(e.times[k]);
            for (std::size_t i = 0; i < e.state_dim; ++i) csv.field(e.state(p, k, i));
            csv.field(e.alpha[p * e.steps() + k]).field(e.beta[p * e.steps() + k]);
            csv.end_row();
        }
    }
}

MarkovChain build_markov_chain(const GameModel& model, const SpaceTimeGrid& grid) {
    if (model.state_dim != 1 || model.noise_dim != 1) {
        throw Error(ErrorKind::DimensionUnsupported, "Markov chain supports n = d = 1 only");
    }
    MarkovChain chain;
    chain.grid_ = grid;
    chain.na_ = model.control_grid_a.size();
    chain.nb_ = model.control_grid_b.size();
    chain.homogeneous_ = model.time_homogeneous;
    const std::size_t slices = chain.homogeneous_ ? 1 : grid.nt;
    const std::size_t total = slices * grid.nodes() * chain.na_ * chain.nb_;
    chain.stencils_.resize(total);
    chain.drift_.resize(total);
    chain.sigma_.resize(total);

    const double dx = grid.dx();
    const double dt = grid.dt();
    for (std::size_t s = 0; s < slices; ++s) {
        const double t = grid.t(s);
        for (std::size_t j = 0; j < grid.nodes(); ++j) {
            const double x = grid.x(j);
            for (std::size_t ia = 0; ia < chain.na_; ++ia) {
                for (std::size_t ib = 0; ib < chain.nb_; ++ib) {
                    const double b = model.drift_at(t, x, model.control_grid_a[ia], model.control_grid_b[ib]);
                    const double sg = model.diffusion_at(t, x, model.control_grid_a[ia], model.control_grid_b[ib]);
                    if (!std::isfinite(b) || !std::isfinite(sg)) {
                        throw Error(ErrorKind::NonFiniteState, "non-finite coefficient at x = " + format_double(x));
                    }
                    const double half = sg * sg * dt / (2.0 * dx * dx);
                    Stencil st;
                    st.up = half + std::max(b, 0.0) * dt / dx;
                    st.down = half + std::max(-b, 0.0) * dt / dx;
                    st.stay = 1.0 - (st.up + st.down);
                    if (st.stay < 0.0 || st.up > 1.0 || st.down > 1.0) {
                        throw Error(ErrorKind::CFLViolation,
                                    "transition probability outside [0,1] at x = " + format_double(x) +
                                        " (p_stay = " + format_double(st.stay) + ", dt = " + format_double(dt) + ")");
                    }
                    const std::size_t k = ((s * grid.nodes() + j) * chain.na_ + ia) * chain.nb_ + ib;
                    chain.stencils_[k] = st;
                    chain.drift_[k] = b;
                    chain.sigma_[k] = sg;
                }
            }
        }
    }
    return chain;
}

}  // namespace isaacs
