#include "isaacs/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "isaacs/csv.hpp"
#include "isaacs/parallel.hpp"
#include "isaacs/random.hpp"

namespace isaacs {

double GameModel::drift_at(double t, double x, double alpha, double beta) const {
    double out = 0.0;
    drift(t, Point(&x, 1), alpha, beta, std::span<double>(&out, 1));
    return out;
}

double GameModel::diffusion_at(double t, double x, double alpha, double beta) const {
    double out = 0.0;
    diffusion(t, Point(&x, 1), alpha, beta, std::span<double>(&out, 1));
    return out;
}

double GameModel::generator_at(double t, double x, double y, double z, double alpha, double beta) const {
    return generator(t, Point(&x, 1), y, Point(&z, 1), alpha, beta);
}

double GameModel::terminal_at(double x) const { return terminal(Point(&x, 1)); }

double GameModel::lower_at(double t, double x) const { return lower_obstacle(t, Point(&x, 1)); }

double GameModel::upper_at(double t, double x) const { return upper_obstacle(t, Point(&x, 1)); }

double GameModel::running_at(double t, double x, double alpha, double beta) const {
    if (!running_cost) throw Error(ErrorKind::InvalidArgument, name + ": model has no running cost");
    return running_cost(t, Point(&x, 1), alpha, beta);
}

GameModel to_model(std::string name, ScalarCoefficients c, double horizon, std::vector<double> control_grid_a,
                   std::vector<double> control_grid_b) {
    GameModel m;
    m.name = std::move(name);
    m.horizon = horizon;
    m.control_grid_a = std::move(control_grid_a);
    m.control_grid_b = std::move(control_grid_b);
    m.form = c.form;

    m.drift = [f = c.drift](double t, Point x, double a, double b, std::span<double> out) {
        out[0] = f(t, x[0], a, b);
    };
    m.diffusion = [f = c.diffusion](double t, Point x, double a, double b, std::span<double> out) {
        out[0] = f(t, x[0], a, b);
    };
    if (c.running_cost) {
        m.running_cost = [f = c.running_cost](double t, Point x, double a, double b) { return f(t, x[0], a, b); };
    }
    if (c.generator) {
        m.generator = [f = c.generator](double t, Point x, double y, Point z, double a, double b) {
            return f(t, x[0], y, z[0], a, b);
        };
    } else if (c.form == GeneratorForm::RunningCost && c.running_cost) {
        m.generator = [f = c.running_cost](double t, Point x, double, Point, double a, double b) {
            return f(t, x[0], a, b);
        };
    } else if (c.form == GeneratorForm::RiskSensitive && c.running_cost) {
        m.generator = [f = c.running_cost](double t, Point x, double, Point z, double a, double b) {
            return f(t, x[0], a, b) + 0.5 * z[0] * z[0];
        };
    } else {
        throw Error(ErrorKind::InvalidArgument, m.name + ": generator missing");
    }
    m.terminal = [f = c.terminal](Point x) { return f(x[0]); };
    m.lower_obstacle = [f = c.lower_obstacle](double t, Point x) { return f(t, x[0]); };
    m.upper_obstacle = [f = c.upper_obstacle](double t, Point x) { return f(t, x[0]); };
    return m;
}

std::vector<double> control_linspace(double lo, double hi, std::size_t count) {
    if (count == 0) throw Error(ErrorKind::InvalidArgument, "control grid must be nonempty");
    if (count == 1) return {0.5 * (lo + hi)};
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Validation

ProbeSpec default_probe(const GameModel& model) {
    ProbeSpec p;
    p.x_range = model.domain;
    double bound = 0.0;
    for (int k = 0; k <= 20; ++k) {
        const double x = model.domain.lo + (model.domain.hi - model.domain.lo) * k / 20.0;
        bound = std::max({bound, std::abs(model.lower_at(0.0, x)), std::abs(model.upper_at(0.0, x)),
                          std::abs(model.terminal_at(x))});
    }
    p.y_range = {-1.5 * bound - 0.5, 1.5 * bound + 0.5};
    return p;
}

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n <= 1) return {lo};
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

// Deterministic uniform stream for probe points.
struct ProbeStream {
    std::uint64_t seed;
    std::uint64_t counter = 0;
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * to_unit_open(counter_hash(seed, 0xA11CE, counter++, 0));
    }
    std::size_t index(std::size_t n) {
        return std::min(n - 1, static_cast<std::size_t>(uniform(0.0, static_cast<double>(n))));
    }
};

struct GeneratorProbe {
    double t;
    std::vector<double> x;
    double y;
    std::vector<double> z;
    std::size_t ia;
    std::size_t ib;
};

struct GeneratorResult {
    double growth_ratio = 0.0;   // |F| / (1 + |z|^2)
    double derivative_ratio = 0.0;       // (|F| + |F_x| + |F_z|) / (1 + |z|^2)
    double c_eps = -std::numeric_limits<double>::infinity();  // dF/dy - eps |z|^2
    bool finite = true;
};

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return s;
}

std::vector<double> witness_of(const GeneratorProbe& p, const GameModel& m) {
    std::vector<double> w{p.t};
    w.insert(w.end(), p.x.begin(), p.x.end());
    w.push_back(p.y);
    w.insert(w.end(), p.z.begin(), p.z.end());
    w.push_back(m.control_grid_a[p.ia]);
    w.push_back(m.control_grid_b[p.ib]);
    return w;
}

std::string format_witness(const std::vector<double>& w) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? ", " : "") << format_double(w[i]);
    os << ')';
    return os.str();
}

GeneratorResult probe_generator(const GameModel& m, const GeneratorProbe& p, const ProbeSpec& spec) {
    GeneratorResult r;
    const double a = m.control_grid_a[p.ia];
    const double b = m.control_grid_b[p.ib];
    const double zz = norm2(p.z);
    const double f = m.generator(p.t, p.x, p.y, p.z, a, b);
    if (!std::isfinite(f)) {
        r.finite = false;
        return r;
    }
    r.growth_ratio = std::abs(f) / (1.0 + zz);

    const double h = spec.fd_step;
    std::vector<double> xs = p.x;
    double grad_x = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double keep = xs[i];
        xs[i] = keep + h;
        const double fp = m.generator(p.t, xs, p.y, p.z, a, b);
        xs[i] = keep - h;
        const double fm = m.generator(p.t, xs, p.y, p.z, a, b);
        xs[i] = keep;
        const double d = (fp - fm) / (2.0 * h);
        grad_x += d * d;
    }
    std::vector<double> zs = p.z;
    double grad_z = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double keep = zs[i];
        zs[i] = keep + h;
        const double fp = m.generator(p.t, p.x, p.y, zs, a, b);
        zs[i] = keep - h;
        const double fm = m.generator(p.t, p.x, p.y, zs, a, b);
        zs[i] = keep;
        const double d = (fp - fm) / (2.0 * h);
        grad_z += d * d;
    }
    const double fy = (m.generator(p.t, p.x, p.y + h, p.z, a, b) - m.generator(p.t, p.x, p.y - h, p.z, a, b)) / (2.0 * h);
    r.derivative_ratio = (std::abs(f) + std::sqrt(grad_x) + std::sqrt(grad_z)) / (1.0 + zz);
    r.c_eps = fy - spec.y_slope_epsilon * zz;
    r.finite = std::isfinite(r.derivative_ratio) && std::isfinite(r.c_eps);
    return r;
}

// |b(x) - b(x')| + |sigma(x) - sigma(x')| over |x - x'|.
double lipschitz_ratio(const GameModel& m, double t, std::span<const double> x1, std::span<const double> x2,
                       double a, double b) {
    const std::size_t n = m.state_dim;
    const std::size_t nd = m.state_dim * m.noise_dim;
    std::vector<double> b1(n), b2(n), s1(nd), s2(nd);
    m.drift(t, x1, a, b, b1);
    m.drift(t, x2, a, b, b2);
    m.diffusion(t, x1, a, b, s1);
    m.diffusion(t, x2, a, b, s2);
    double db = 0.0, ds = 0.0, dx = 0.0;
    for (std::size_t i = 0; i < n; ++i) db += (b1[i] - b2[i]) * (b1[i] - b2[i]);
    for (std::size_t i = 0; i < nd; ++i) ds += (s1[i] - s2[i]) * (s1[i] - s2[i]);
    for (std::size_t i = 0; i < x1.size(); ++i) dx += (x1[i] - x2[i]) * (x1[i] - x2[i]);
    if (dx == 0.0) return 0.0;
    return (std::sqrt(db) + std::sqrt(ds)) / std::sqrt(dx);
}

}  // namespace

bool ModelValidationReport::ok() const { return first_failure() == nullptr; }

const AssumptionCheck* ModelValidationReport::first_failure() const {
    for (const auto& c : checks) {
        if (!c.passed) return &c;
    }
    return nullptr;
}

void ModelValidationReport::throw_if_failed() const {
    if (const auto* f = first_failure()) {
        throw Error(f->violation.value_or(ErrorKind::InvalidArgument),
                    f->assumption + " violated (measured " + format_double(f->measured) + ", declared " +
                        format_double(f->declared) + ") at " + format_witness(f->witness));
    }
}

ModelValidationReport validate_model(const GameModel& m, const ProbeSpec& spec) {
    if (spec.x_points == 0 || spec.t_points == 0 || spec.x_range.hi < spec.x_range.lo) {
        throw Error(ErrorKind::InvalidArgument, "probe domain must be bounded with at least one probe");
    }
    if (m.control_grid_a.empty() || m.control_grid_b.empty()) {
        throw Error(ErrorKind::InvalidArgument, m.name + ": empty control grid");
    }
    const std::size_t n = m.state_dim;
    const std::size_t d = m.noise_dim;
    ProbeStream rng{spec.seed};

    const auto xs = linspace(spec.x_range.lo, spec.x_range.hi, spec.x_points);
    const auto ts = linspace(0.0, m.horizon, spec.t_points);
    const auto ys = linspace(spec.y_range.lo, spec.y_range.hi, spec.y_points);
    const auto zs = linspace(-spec.z_max, spec.z_max, spec.z_points);
    auto point = [n](double v) { return std::vector<double>(n, v); };

    // (t, x) probes: tensor grid first, then random points.
    std::vector<std::pair<double, std::vector<double>>> tx;
    for (double t : ts)
        for (double x : xs) tx.emplace_back(t, point(x));
    for (std::size_t k = 0; k < spec.random_samples; ++k) {
        const double t = rng.uniform(0.0, m.horizon);
        std::vector<double> x(n);
        for (auto& e : x) e = rng.uniform(spec.x_range.lo, spec.x_range.hi);
        tx.emplace_back(t, std::move(x));
    }

    std::vector<GeneratorProbe> gen;
    for (double t : ts)
        for (double x : xs)
            for (double y : ys)
                for (double z : zs)
                    for (std::size_t ia = 0; ia < m.control_grid_a.size(); ++ia)
                        for (std::size_t ib = 0; ib < m.control_grid_b.size(); ++ib) {
                            std::vector<double> zv(d, 0.0);
                            zv[0] = z;
                            gen.push_back({t, point(x), y, std::move(zv), ia, ib});
                        }
    for (std::size_t k = 0; k < spec.random_samples; ++k) {
        GeneratorProbe p;
        p.t = rng.uniform(0.0, m.horizon);
        p.x.resize(n);
        for (auto& e : p.x) e = rng.uniform(spec.x_range.lo, spec.x_range.hi);
        p.y = rng.uniform(spec.y_range.lo, spec.y_range.hi);
        p.z.resize(d);
        for (auto& e : p.z) e = rng.uniform(-spec.z_max, spec.z_max);
        p.ia = rng.index(m.control_grid_a.size());
        p.ib = rng.index(m.control_grid_b.size());
        gen.push_back(std::move(p));
    }

    ModelValidationReport report;
    report.probe_count = tx.size() + gen.size();
    constexpr double kRel = 1e-12;

    // Obstacle order, terminal sandwich, data bounds.
    {
        AssumptionCheck order{"obstacle order h < h'", true, std::numeric_limits<double>::infinity(), 0.0, {}, {}};
        AssumptionCheck sandwich{"terminal sandwich h(T,x) <= g(x) <= h'(T,x)", true, 0.0, 0.0, {}, {}};
        for (const auto& [t, x] : tx) {
            const double lo = m.lower_obstacle(t, x);
            const double hi = m.upper_obstacle(t, x);
            report.lower_bound = std::max(report.lower_bound, std::abs(lo));
            report.upper_bound = std::max(report.upper_bound, std::abs(hi));
            if (!(hi - lo < order.measured)) continue;
            order.measured = hi - lo;
            order.witness = {t};
            order.witness.insert(order.witness.end(), x.begin(), x.end());
        }
        order.passed = order.measured > 0.0;
        if (!order.passed) order.violation = ErrorKind::ObstacleOrderViolation;

        for (const auto& [t, x] : tx) {
            const double g = m.terminal(x);
            report.terminal_bound = std::max(report.terminal_bound, std::abs(g));
            const double excess = std::max(m.lower_obstacle(m.horizon, x) - g, g - m.upper_obstacle(m.horizon, x));
            if (excess > sandwich.measured || (!std::isfinite(g) && sandwich.witness.empty())) {
                sandwich.measured = std::isfinite(g) ? excess : std::numeric_limits<double>::infinity();
                sandwich.witness = {m.horizon};
                sandwich.witness.insert(sandwich.witness.end(), x.begin(), x.end());
            }
        }
        sandwich.passed = sandwich.measured <= 0.0;
        if (!sandwich.passed) sandwich.violation = ErrorKind::TerminalSandwichViolation;
        report.checks.push_back(std::move(order));
        report.checks.push_back(std::move(sandwich));
    }

    // Growth and derivative bounds, probes evaluated in parallel.
    {
        std::vector<GeneratorResult> results(gen.size());
        parallel_for(gen.size(), [&](std::size_t i) { results[i] = probe_generator(m, gen[i], spec); });

        AssumptionCheck growth{"quadratic growth |F| <= C(1+|z|^2)", true, 0.0, m.quad_growth_c, {}, {}};
        AssumptionCheck deriv{"derivative bound |F|+|F_x|+|F_z| <= C3(1+|z|^2)", true, 0.0, m.derivative_c, {}, {}};
        AssumptionCheck y_slope{"monotonicity in y dF/dy <= C_eps + eps|z|^2", true, -std::numeric_limits<double>::infinity(), 0.0, {}, {}};
        std::size_t worst_growth = 0, worst_deriv = 0, worst_y = 0;
        bool finite = true;
        std::size_t nonfinite_at = 0;
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            if (!r.finite) {
                if (finite) nonfinite_at = i;
                finite = false;
                continue;
            }
            if (r.growth_ratio > growth.measured) growth.measured = r.growth_ratio, worst_growth = i;
            if (r.derivative_ratio > deriv.measured) deriv.measured = r.derivative_ratio, worst_deriv = i;
            if (r.c_eps > y_slope.measured) y_slope.measured = r.c_eps, worst_y = i;
        }
        growth.witness = witness_of(gen[finite ? worst_growth : nonfinite_at], m);
        growth.passed = finite && growth.measured <= m.quad_growth_c * (1.0 + kRel);
        if (!growth.passed) growth.violation = ErrorKind::GrowthViolation;
        deriv.witness = witness_of(gen[worst_deriv], m);
        deriv.passed = deriv.measured <= m.derivative_c * (1.0 + 1e-6);
        if (!deriv.passed) deriv.violation = ErrorKind::DerivativeBoundViolation;
        y_slope.witness = witness_of(gen[worst_y], m);
        y_slope.passed = std::isfinite(y_slope.measured);
        if (!y_slope.passed) y_slope.violation = ErrorKind::DerivativeBoundViolation;

        report.empirical_growth = growth.measured;
        report.derivative_constant = deriv.measured;
        report.y_slope_c_eps = y_slope.measured;
        report.checks.push_back(std::move(growth));
        report.checks.push_back(std::move(deriv));
        report.checks.push_back(std::move(y_slope));
    }

    // Lipschitz ratio of b, sigma on adjacent grid pairs and random pairs.
    {
        struct Pair {
            double t;
            std::vector<double> x1, x2;
            std::size_t ia, ib;
        };
        std::vector<Pair> pairs;
        for (double t : ts)
            for (std::size_t k = 0; k + 1 < xs.size(); ++k)
                for (std::size_t ia = 0; ia < m.control_grid_a.size(); ++ia)
                    for (std::size_t ib = 0; ib < m.control_grid_b.size(); ++ib)
                        pairs.push_back({t, point(xs[k]), point(xs[k + 1]), ia, ib});
        for (std::size_t k = 0; k < spec.random_samples; ++k) {
            Pair p{rng.uniform(0.0, m.horizon), std::vector<double>(n), std::vector<double>(n), 0, 0};
            for (auto& e : p.x1) e = rng.uniform(spec.x_range.lo, spec.x_range.hi);
            for (auto& e : p.x2) e = rng.uniform(spec.x_range.lo, spec.x_range.hi);
            p.ia = rng.index(m.control_grid_a.size());
            p.ib = rng.index(m.control_grid_b.size());
            pairs.push_back(std::move(p));
        }
        std::vector<double> ratios(pairs.size());
        parallel_for(pairs.size(), [&](std::size_t i) {
            const auto& p = pairs[i];
            ratios[i] = lipschitz_ratio(m, p.t, p.x1, p.x2, m.control_grid_a[p.ia], m.control_grid_b[p.ib]);
        });
        AssumptionCheck lipschitz{"Lipschitz b, sigma", true, 0.0, m.lipschitz_cl, {}, {}};
        std::size_t worst = 0;
        bool finite = true;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            if (!std::isfinite(ratios[i])) {
                finite = false;
                worst = i;
                break;
            }
            if (ratios[i] > lipschitz.measured) lipschitz.measured = ratios[i], worst = i;
        }
        if (!pairs.empty()) {
            const auto& p = pairs[worst];
            lipschitz.witness = {p.t};
            lipschitz.witness.insert(lipschitz.witness.end(), p.x1.begin(), p.x1.end());
            lipschitz.witness.insert(lipschitz.witness.end(), p.x2.begin(), p.x2.end());
        }
        lipschitz.passed = finite && lipschitz.measured <= m.lipschitz_cl * (1.0 + 1e-9);
        if (!lipschitz.passed) lipschitz.violation = ErrorKind::LipschitzViolation;
        report.empirical_lipschitz = lipschitz.measured;
        report.checks.push_back(std::move(lipschitz));
        report.probe_count += pairs.size();
    }
    return report;
}

// ---------------------------------------------------------------------------
// Built-in models

namespace {

double param(const ModelParams& params, const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void check_keys(const std::string& name, const ModelParams& params, std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end()) {
            throw Error(ErrorKind::ConfigError, "model " + name + " has no parameter '" + k + "'");
        }
    }
}

std::size_t size_or(std::size_t requested, std::size_t fallback) { return requested == 0 ? fallback : requested; }

GameModel heat_no_control(const ModelParams& p, ControlGridSizes) {
    check_keys("heat_no_control", p, {"sigma", "T", "x_min", "x_max", "lower", "upper", "x0"});
    const double sigma = param(p, "sigma", 1.0);
    const double lower = param(p, "lower", -2.0);
    const double upper = param(p, "upper", 2.0);
    ScalarCoefficients c;
    c.form = GeneratorForm::RunningCost;
    c.drift = [](double, double, double, double) { return 0.0; };
    c.diffusion = [sigma](double, double, double, double) { return sigma; };
    c.running_cost = [](double, double, double, double) { return 0.0; };
    c.terminal = [](double x) { return std::cos(x); };
    c.lower_obstacle = [lower](double, double) { return lower; };
    c.upper_obstacle = [upper](double, double) { return upper; };
    GameModel m = to_model("heat_no_control", c, param(p, "T", 1.0), {0.0}, {0.0});
    m.domain = {param(p, "x_min", -2.0 * std::numbers::pi), param(p, "x_max", 2.0 * std::numbers::pi)};
    m.x0 = param(p, "x0", 0.0);
    m.quad_growth_c = 1.0;
    m.lipschitz_cl = 1.0;
    m.derivative_c = 1.0;
    return m;
}

GameModel risk_sensitive_1d(const ModelParams& p, ControlGridSizes sizes) {
    check_keys("risk_sensitive_1d", p, {"sigma", "phi_amp", "kappa", "control_max", "T", "x_min", "x_max", "x0"});
    const double sigma = param(p, "sigma", 0.5);
    const double amp = param(p, "phi_amp", 0.3);
    const double kappa = param(p, "kappa", 0.1);
    const double cmax = param(p, "control_max", 0.5);
    ScalarCoefficients c;
    c.form = GeneratorForm::RiskSensitive;
    c.drift = [](double, double, double a, double b) { return a + b; };
    c.diffusion = [sigma](double, double, double, double) { return sigma; };
    c.running_cost = [amp, kappa](double, double x, double a, double b) {
        return amp * std::sin(x) - kappa * a * a + kappa * b * b;
    };
    c.terminal = [](double x) { return 0.5 * std::cos(x); };
    c.lower_obstacle = [](double, double x) { return 0.4 * std::cos(x) - 0.15; };
    c.upper_obstacle = [](double, double) { return 0.55; };
    GameModel m = to_model("risk_sensitive_1d", c, param(p, "T", 1.0), control_linspace(-cmax, cmax, size_or(sizes.a, 3)),
                           control_linspace(-cmax, cmax, size_or(sizes.b, 3)));
    m.domain = {param(p, "x_min", -3.0), param(p, "x_max", 3.0)};
    m.x0 = param(p, "x0", 0.0);
    // |phi| <= amp + kappa cmax^2 must stay below C = 1/2 for the growth bound.
    m.quad_growth_c = 0.5;
    m.lipschitz_cl = 1.0;
    m.derivative_c = 2.0;
    return m;
}

GameModel separable_isaacs(const ModelParams& p, ControlGridSizes sizes) {
    check_keys("separable_isaacs", p, {"sigma", "T", "x_min", "x_max", "x0"});
    const double sigma = param(p, "sigma", 0.6);
    ScalarCoefficients c;
    c.form = GeneratorForm::RunningCost;
    c.drift = [](double, double, double a, double b) { return a + 0.5 * b; };
    c.diffusion = [sigma](double, double, double, double) { return sigma; };
    c.running_cost = [](double, double x, double, double) { return 0.2 * std::sin(x); };
    c.terminal = [](double x) { return 0.3 * std::sin(x); };
    c.lower_obstacle = [](double, double) { return -0.5; };
    c.upper_obstacle = [](double, double) { return 0.5; };
    GameModel m = to_model("separable_isaacs", c, param(p, "T", 1.0), control_linspace(-1.0, 1.0, size_or(sizes.a, 3)),
                           control_linspace(-1.0, 1.0, size_or(sizes.b, 3)));
    m.domain = {param(p, "x_min", -3.0), param(p, "x_max", 3.0)};
    m.x0 = param(p, "x0", 0.0);
    m.quad_growth_c = 1.0;
    m.lipschitz_cl = 1.0;
    m.derivative_c = 1.0;
    return m;
}

GameModel nonseparable(const ModelParams& p, ControlGridSizes sizes) {
    check_keys("nonseparable", p, {"sigma", "T", "x_min", "x_max", "x0"});
    const double sigma = param(p, "sigma", 0.5);
    ScalarCoefficients c;
    c.form = GeneratorForm::RunningCost;
    c.drift = [](double, double, double a, double b) { return a * b; };
    c.diffusion = [sigma](double, double, double, double) { return sigma; };
    c.running_cost = [](double, double x, double, double) { return 0.1 * std::cos(x); };
    c.terminal = [](double x) { return 0.2 * std::cos(x); };
    c.lower_obstacle = [](double, double) { return -0.6; };
    c.upper_obstacle = [](double, double) { return 0.6; };
    GameModel m = to_model("nonseparable", c, param(p, "T", 1.0), control_linspace(-1.0, 1.0, size_or(sizes.a, 2)),
                           control_linspace(-1.0, 1.0, size_or(sizes.b, 2)));
    m.domain = {param(p, "x_min", -3.0), param(p, "x_max", 3.0)};
    m.x0 = param(p, "x0", 0.0);
    m.quad_growth_c = 1.0;
    m.lipschitz_cl = 1.0;
    m.derivative_c = 1.0;
    return m;
}

GameModel ramsey_1d(const ModelParams& p, ControlGridSizes sizes) {
    check_keys("ramsey_1d", p, {"r", "sigma", "c_max", "utility", "T", "x_min", "x_max", "x0"});
    const double r = param(p, "r", 0.05);
    const double sigma = param(p, "sigma", 0.2);
    const double cmax = param(p, "c_max", 0.2);
    const double util = param(p, "utility", 0.4);
    ScalarCoefficients c;
    c.form = GeneratorForm::RiskSensitive;
    c.drift = [r](double, double x, double a, double) { return x * (r - a); };
    c.diffusion = [sigma](double, double x, double, double) { return sigma * x; };
    c.running_cost = [util](double, double x, double a, double) { return util * (1.0 - std::exp(-a * x)); };
    c.terminal = [](double x) { return 0.2 * std::tanh(x - 1.0); };
    c.lower_obstacle = [](double, double) { return -0.5; };
    c.upper_obstacle = [](double, double) { return 0.5; };
    GameModel m = to_model("ramsey_1d", c, param(p, "T", 1.0), control_linspace(0.0, cmax, size_or(sizes.a, 3)), {0.0});
    m.domain = {param(p, "x_min", 0.2), param(p, "x_max", 3.0)};
    m.x0 = param(p, "x0", 1.0);
    m.quad_growth_c = 0.5;
    m.lipschitz_cl = 1.0;
    m.derivative_c = 2.0;
    return m;
}

using Factory = GameModel (*)(const ModelParams&, ControlGridSizes);

const std::array<std::pair<const char*, Factory>, 5> kRegistry{{
    {"heat_no_control", &heat_no_control},
    {"risk_sensitive_1d", &risk_sensitive_1d},
    {"separable_isaacs", &separable_isaacs},
    {"nonseparable", &nonseparable},
    {"ramsey_1d", &ramsey_1d},
}};

}  // namespace

std::vector<std::string> builtin_model_names() {
    std::vector<std::string> names;
    for (const auto& [name, f] : kRegistry) names.emplace_back(name);
    return names;
}

std::map<std::string, GameModel> builtin_models() {
    std::map<std::string, GameModel> all;
    for (const auto& [name, f] : kRegistry) all.emplace(name, f({}, {}));
    return all;
}

GameModel builtin_model(const std::string& name, const ModelParams& params, ControlGridSizes sizes) {
    for (const auto& [n, f] : kRegistry) {
        if (name == n) return f(params, sizes);
    }
    throw Error(ErrorKind::NotFound, "no built-in model named '" + name + "'");
}

}  // namespace isaacs
