#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>

#include "isaacs/dynkin.hpp"
#include "isaacs/hamiltonian.hpp"
#include "isaacs/harness.hpp"
#include "isaacs/pde.hpp"
#include "isaacs/rbsde.hpp"
#include "isaacs/transforms.hpp"

namespace py = pybind11;
using namespace isaacs;

namespace {

py::array_t<double> to_array(const LevelField<double>& f) {
    py::array_t<double> a({f.levels(), f.nodes()});
    auto m = a.mutable_unchecked<2>();
    for (std::size_t n = 0; n < f.levels(); ++n)
        for (std::size_t j = 0; j < f.nodes(); ++j) m(n, j) = f(n, j);
    return a;
}

py::array_t<double> axis(std::size_t count, const std::function<double(std::size_t)>& at) {
    py::array_t<double> a(count);
    auto m = a.mutable_unchecked<1>();
    for (std::size_t k = 0; k < count; ++k) m(k) = at(k);
    return a;
}

struct Problem {
    GameModel model;
    SpaceTimeGrid grid;
};

Problem problem(const std::string& name, const ModelParams& params, std::size_t nx, std::optional<double> x_min,
                std::optional<double> x_max, std::optional<std::size_t> nt) {
    Problem p{builtin_model(name, params), {}};
    const double lo = x_min.value_or(p.model.domain.lo), hi = x_max.value_or(p.model.domain.hi);
    p.grid = nt ? SpaceTimeGrid::make(lo, hi, nx, *nt, p.model.horizon) : auto_cfl_grid(p.model, lo, hi, nx);
    return p;
}

py::dict grid_dict(const SpaceTimeGrid& g) {
    py::dict d;
    d["t"] = axis(g.levels(), [&](std::size_t n) { return g.t(n); });
    d["x"] = axis(g.nodes(), [&](std::size_t j) { return g.x(j); });
    return d;
}

Side side_of(const std::string& s) {
    if (s == "lower") return Side::Lower;
    if (s == "upper") return Side::Upper;
    throw Error(ErrorKind::InvalidArgument, "side must be 'lower' or 'upper'");
}

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Double-obstacle Isaacs equations, reflected BSDEs and Dynkin games on a 1D lattice";

    py::register_exception<Error>(m, "IsaacsError", PyExc_RuntimeError);

    m.def("model_names", &builtin_model_names);

    m.def(
        "validate_model",
        [](const std::string& name, const ModelParams& params) {
            const GameModel model = builtin_model(name, params);
            const ModelValidationReport r = validate_model(model, default_probe(model));
            py::list checks;
            for (const AssumptionCheck& c : r.checks) {
                py::dict d;
                d["assumption"] = c.assumption;
                d["passed"] = c.passed;
                d["measured"] = c.measured;
                d["declared"] = c.declared;
                checks.append(d);
            }
            return checks;
        },
        py::arg("model"), py::arg("params") = ModelParams{});

    m.def(
        "hamiltonians",
        [](const std::string& name, double t, double x, double u, double q, double hessian) {
            const GameModel model = builtin_model(name);
            HamiltonianQuery query;
            query.t = t;
            query.x = {x};
            query.u = u;
            query.q = {q};
            query.hessian = {hessian};
            return py::make_tuple(eval_h_minus(model, query).value, eval_h_plus(model, query).value);
        },
        py::arg("model"), py::arg("t"), py::arg("x"), py::arg("u"), py::arg("q"), py::arg("hessian"),
        "Returns (H-, H+) at one query point.");

    m.def(
        "solve_pde",
        [](const std::string& name, std::size_t nx, const std::string& side, bool transform, const ModelParams& params,
           std::optional<double> x_min, std::optional<double> x_max, std::optional<std::size_t> nt) {
            const Problem p = problem(name, params, nx, x_min, x_max, nt);
            const ValueField f = transform ? solve_via_transform(p.model, p.grid, side_of(side))
                                           : solve_double_obstacle(p.model, p.grid, side_of(side));
            py::dict d = grid_dict(p.grid);
            d["value"] = to_array(f.values);
            d["k_plus"] = to_array(f.k_plus);
            d["k_minus"] = to_array(f.k_minus);
            d["u0"] = f.interpolate(0, p.model.x0);
            if (!transform) d["residual"] = residual_check(f, p.model, p.grid, side_of(side));
            return d;
        },
        py::arg("model"), py::arg("nx") = 100, py::arg("side") = "lower", py::arg("transform") = false,
        py::arg("params") = ModelParams{}, py::arg("x_min") = py::none(), py::arg("x_max") = py::none(),
        py::arg("nt") = py::none());

    m.def(
        "solve_rbsde",
        [](const std::string& name, std::size_t nx, std::optional<double> penalty, const ModelParams& params,
           std::optional<std::size_t> nt) {
            const Problem p = problem(name, params, nx, std::nullopt, std::nullopt, nt);
            const ChainPolicy policy = solve_double_obstacle(p.model, p.grid, Side::Lower).saddle_policy();
            const MarkovChain chain = build_markov_chain(p.model, p.grid);
            const BarrierData data = barrier_data(p.model, p.grid);
            const RBSDESolution s = penalty ? solve_penalized(chain, policy, driver_from_model(p.model), data, *penalty)
                                            : solve_rbsde_chain(chain, policy, driver_from_model(p.model), data);
            const SkorokhodResiduals r = skorokhod_residuals(s);
            py::dict d = grid_dict(p.grid);
            d["y"] = to_array(s.y);
            d["z"] = to_array(s.z);
            d["dk_plus"] = to_array(s.dk_plus);
            d["dk_minus"] = to_array(s.dk_minus);
            d["skorokhod"] = py::make_tuple(r.lower, r.upper);
            return d;
        },
        py::arg("model"), py::arg("nx") = 100, py::arg("penalty") = py::none(), py::arg("params") = ModelParams{},
        py::arg("nt") = py::none(), "Chain solve with controls frozen at the lower PDE saddle.");

    m.def(
        "dynkin_value",
        [](const std::string& name, std::size_t nx, bool exponential, const ModelParams& params) {
            const Problem p = problem(name, params, nx, std::nullopt, std::nullopt, std::nullopt);
            const ChainPolicy policy = solve_double_obstacle(p.model, p.grid, Side::Lower).saddle_policy();
            const DynkinValue v = dynkin_value(build_markov_chain(p.model, p.grid), policy,
                                               dynkin_data(p.model, p.grid, policy),
                                               exponential ? PayoffMode::Exponential : PayoffMode::Additive);
            py::dict d = grid_dict(p.grid);
            d["value"] = to_array(v.value);
            return d;
        },
        py::arg("model"), py::arg("nx") = 100, py::arg("exponential") = true, py::arg("params") = ModelParams{});

    m.def(
        "exp_transform",
        [](double phi, double c, double y, double z) {
            const GeneratorFn F = [phi](double, Point, double, Point zz, double, double) {
                return phi + 0.5 * zz[0] * zz[0];
            };
            const double x = 0.0;
            return exp_transform_generator(F, c)(0.0, Point(&x, 1), y, Point(&z, 1), 0.0, 0.0);
        },
        py::arg("phi"), py::arg("c"), py::arg("y"), py::arg("z"),
        "Transformed generator of F = phi + |z|^2/2 at (y, z).");

    m.def("inverse_transform_value", &inverse_transform_value, py::arg("y"), py::arg("c"));

    m.def(
        "run",
        [](const std::string& config_json, const std::filesystem::path& out_dir) {
            const ExperimentConfig c = parse_config(config_json);
            const RunManifest r = c.sweep_axis.empty() ? run_experiment(c, out_dir) : run_sweep(c, out_dir);
            return json_loads(manifest_json(r));
        },
        py::arg("config_json"), py::arg("out_dir"), "Runs an experiment config; returns the manifest as a dict.");

    m.attr("__version__") = ISAACS_LAB_VERSION;
}
