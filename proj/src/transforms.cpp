#include "isaacs/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "isaacs/csv.hpp"

namespace isaacs {

GeneratorFn exp_transform_generator(GeneratorFn generator, double c) {
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "transform constant C must be positive");
    return [F = std::move(generator), c](double t, Point x, double y, Point z, double alpha, double beta) {
        if (!(y > 0.0)) return 0.0;
        const double scale = 2.0 * c * y;
        double zz = 0.0;
        double buf[8];
        std::vector<double> heap;
        double* zs = buf;
        if (z.size() > 8) {
            heap.resize(z.size());
            zs = heap.data();
        }
        for (std::size_t k = 0; k < z.size(); ++k) {
            zs[k] = z[k] / scale;
            zz += z[k] * z[k];
        }
        const double u = std::log(y) / (2.0 * c);
        return scale * (F(t, x, u, Point(zs, z.size()), alpha, beta) - zz / (4.0 * c * y * y));
    };
}

TransformedModel transform_data(const GameModel& model, const SpaceTimeGrid& probe) {
    const double c = model.quad_growth_c;
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadratic growth constant C must be positive");
    TransformedModel out;
    out.c = c;
    out.model = model;
    GameModel& m = out.model;
    m.name = model.name + "_exp";
    m.generator = exp_transform_generator(model.generator, c);
    m.form = GeneratorForm::General;
    m.running_cost = nullptr;
    m.terminal = [g = model.terminal, c](Point x) { return std::exp(2.0 * c * g(x)); };
    m.lower_obstacle = [h = model.lower_obstacle, c](double t, Point x) { return std::exp(2.0 * c * h(t, x)); };
    m.upper_obstacle = [h = model.upper_obstacle, c](double t, Point x) { return std::exp(2.0 * c * h(t, x)); };

    double inv_lower = INFINITY;
    double upper = -INFINITY;
    for (std::size_t n = 0; n < probe.levels(); ++n) {
        for (std::size_t j = 0; j < probe.nodes(); ++j) {
            inv_lower = std::min(inv_lower, 1.0 / m.lower_at(probe.t(n), probe.x(j)));
            upper = std::max(upper, m.upper_at(probe.t(n), probe.x(j)));
        }
    }
    out.m_bound = std::max(inv_lower, upper);
    return out;
}

double inverse_transform_value(double y, double c) {
    if (!(y > 0.0)) throw Error(ErrorKind::NonpositiveInput, "inverse transform needs y > 0, got " + format_double(y));
    return std::log(y) / (2.0 * c);
}

double smooth_cutoff(double s, double p) {
    const double a = std::abs(s);
    if (a <= p) return 1.0;
    if (a >= p + 1.0) return 0.0;
    const double u = a - p;
    return 1.0 - u * u * (3.0 - 2.0 * u);
}

GeneratorFn cutoff_generator(GeneratorFn f, double c, double m_bound) {
    return [f = std::move(f), c, m_bound](double t, Point x, double y, Point z, double alpha, double beta) {
        if (!(y > 0.0)) return 0.0;
        const double r = smooth_cutoff(std::log(y) / (2.0 * c), m_bound);
        if (r == 0.0) return 0.0;
        return f(t, x, y, z, alpha, beta) * r;
    };
}

ApproximationDomain approximation_domain(const TransformedModel& transformed) {
    ApproximationDomain d;
    const GameModel& m = transformed.model;
    d.x = m.domain;
    d.y = {0.0, std::exp(2.0 * transformed.c * (transformed.m_bound + 1.0))};
    d.horizon = m.horizon;
    d.control_a = m.control_grid_a;
    d.control_b = m.control_grid_b;
    d.state_dim = m.state_dim;
    d.noise_dim = m.noise_dim;
    return d;
}

const MollifierStencil& mollifier_stencil() {
    static const MollifierStencil stencil = [] {
        MollifierStencil s;
        double total = 0.0;
        for (int i = -7; i <= 7; ++i) {
            for (int j = -7; j <= 7; ++j) {
                for (int k = -7; k <= 7; ++k) {
                    const double r2 = (i * i + j * j + k * k) / 64.0;
                    if (r2 >= 1.0) continue;
                    const double w = std::exp(-1.0 / (1.0 - r2));
                    s.dx.push_back(i / 8.0);
                    s.dy.push_back(j / 8.0);
                    s.dz.push_back(k / 8.0);
                    s.weight.push_back(w);
                    total += w;
                }
            }
        }
        for (double& w : s.weight) w /= total;
        return s;
    }();
    return stencil;
}

namespace {

void require_scalar(std::size_t n, std::size_t d) {
    if (n + 1 + d > 3) {
        throw Error(ErrorKind::DimensionUnsupported,
                    "mollification supports n + 1 + d <= 3, got " + std::to_string(n + 1 + d));
    }
}

double shift_of(int p) { return 3.0 / std::ldexp(1.0, p + 2); }

// f_tilde * rho_p(|x| + |z|) +- 3 / 2^{p+2} at scalar arguments.
double shifted(const GeneratorFn& f, double t, double x, double y, double z, double a, double b, int p,
               double sign) {
    const double r = smooth_cutoff(std::abs(x) + std::abs(z), p);
    double base = 0.0;
    if (r > 0.0) base = f(t, Point(&x, 1), y, Point(&z, 1), a, b) * r;
    return base + sign * shift_of(p);
}

double mollified(const GeneratorFn& f, double t, double x, double y, double z, double a, double b, int p,
                 double sign, double eps) {
    const MollifierStencil& s = mollifier_stencil();
    double acc = 0.0;
    for (std::size_t k = 0; k < s.weight.size(); ++k) {
        acc += s.weight[k] * shifted(f, t, x - eps * s.dx[k], y - eps * s.dy[k], z - eps * s.dz[k], a, b, p, sign);
    }
    return acc;
}

struct Sample {
    double t, x, y, z, a, b;
};

std::vector<Sample> draw_samples(const ApproximationDomain& d, double z_max, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> ia(0, d.control_a.size() - 1);
    std::uniform_int_distribution<std::size_t> ib(0, d.control_b.size() - 1);
    const double y_span = d.y.hi - d.y.lo;
    std::vector<Sample> out(count);
    for (Sample& s : out) {
        s.t = d.horizon * u01(rng);
        s.x = d.x.lo + (d.x.hi - d.x.lo) * u01(rng);
        s.y = d.y.lo - 0.05 * y_span + 1.1 * y_span * u01(rng);
        s.z = z_max * (2.0 * u01(rng) - 1.0);
        s.a = d.control_a[ia(rng)];
        s.b = d.control_b[ib(rng)];
    }
    return out;
}

}  // namespace

ApproximationSchedule make_approximation_schedule(const GeneratorFn& f_tilde, const ApproximationDomain& domain,
                                                  int p_max, std::uint64_t seed, std::size_t samples) {
    require_scalar(domain.state_dim, domain.noise_dim);
    if (p_max < 1) throw Error(ErrorKind::InvalidArgument, "p_max must be at least 1");
    if (domain.control_a.empty() || domain.control_b.empty()) {
        throw Error(ErrorKind::InvalidArgument, "approximation domain needs nonempty control grids");
    }
    ApproximationSchedule sched;
    sched.p_max = p_max;
    sched.domain = domain;
    sched.eps.assign(static_cast<std::size_t>(p_max) + 1, 0.0);
    sched.measured_error.assign(static_cast<std::size_t>(p_max) + 1, 0.0);

    // C': sup |f_tilde| over the region where the cutoffs leave it nonzero.
    const double z_reach = p_max + 1.0;
    constexpr std::size_t nxp = 21, nyp = 41, nzp = 21;
    double sup = 0.0;
    for (std::size_t it = 0; it < 3; ++it) {
        const double t = domain.horizon * static_cast<double>(it) / 2.0;
        for (std::size_t i = 0; i < nxp; ++i) {
            const double x = domain.x.lo + (domain.x.hi - domain.x.lo) * static_cast<double>(i) / (nxp - 1);
            for (std::size_t k = 0; k < nyp; ++k) {
                const double y = domain.y.lo + (domain.y.hi - domain.y.lo) * static_cast<double>(k) / (nyp - 1);
                for (std::size_t l = 0; l < nzp; ++l) {
                    const double z = -z_reach + 2.0 * z_reach * static_cast<double>(l) / (nzp - 1);
                    for (double a : domain.control_a)
                        for (double b : domain.control_b)
                            sup = std::max(sup, std::abs(f_tilde(t, Point(&x, 1), y, Point(&z, 1), a, b)));
                }
            }
        }
    }
    for (const Sample& s : draw_samples(domain, z_reach, 20 * samples, seed ^ 0xC0FFEEULL)) {
        sup = std::max(sup, std::abs(f_tilde(s.t, Point(&s.x, 1), s.y, Point(&s.z, 1), s.a, s.b)));
    }
    if (!std::isfinite(sup)) throw Error(ErrorKind::NonFiniteState, "cutoff generator is not bounded on the probe");
    sched.c_prime = 1.05 * sup + 1e-12;

    double eps = 0.5;
    for (int p = 1; p <= p_max; ++p) {
        const double target = 0.5 * std::ldexp(1.0, -(p + 2));
        const auto pts = draw_samples(domain, p + 2.0, samples, seed + static_cast<std::uint64_t>(p));
        double err = INFINITY;
        for (int attempt = 0; attempt < 60 && !(err <= target); ++attempt) {
            if (attempt > 0) eps *= 0.5;
            err = 0.0;
            for (const Sample& s : pts) {
                const double exact = shifted(f_tilde, s.t, s.x, s.y, s.z, s.a, s.b, p, 1.0);
                const double smooth = mollified(f_tilde, s.t, s.x, s.y, s.z, s.a, s.b, p, 1.0, eps);
                err = std::max(err, std::abs(smooth - exact));
            }
        }
        if (!(err <= target)) {
            throw Error(ErrorKind::NonFiniteState, "mollification error did not reach 2^-(p+2) at p = " +
                                                       std::to_string(p));
        }
        sched.eps[static_cast<std::size_t>(p)] = eps;
        sched.measured_error[static_cast<std::size_t>(p)] = err;
        eps *= std::sqrt(0.5);
    }
    return sched;
}

GeneratorFn build_lipschitz_approximation(const GeneratorFn& f_tilde, const ApproximationSchedule& schedule, int p,
                                          ApproxDirection direction) {
    require_scalar(schedule.domain.state_dim, schedule.domain.noise_dim);
    if (p < 1 || p > schedule.p_max) {
        throw Error(ErrorKind::InvalidArgument, "approximation index p = " + std::to_string(p) + " outside 1.." +
                                                    std::to_string(schedule.p_max));
    }
    const double sign = direction == ApproxDirection::Upper ? 1.0 : -1.0;
    const double eps = schedule.eps[static_cast<std::size_t>(p)];
    const double outer = sign * (schedule.c_prime + std::ldexp(1.0, -p));
    return [f_tilde, p, sign, eps, outer](double t, Point x, double y, Point z, double a, double b) {
        const double xs = x[0];
        const double zs = z[0];
        const double r = smooth_cutoff(std::abs(xs) + std::abs(zs), p - 1);
        if (r == 0.0) return outer;
        const double inner = mollified(f_tilde, t, xs, y, zs, a, b, p, sign, eps);
        return r * inner + (1.0 - r) * outer;
    };
}

}  // namespace isaacs
