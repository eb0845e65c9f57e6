// Python bindings for the lattice large-deviation toolkit. Models come in as
// JSON strings (the same schema the CLI reads); states, controls and paths
// cross the boundary as numpy arrays.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "latdev/bench.hpp"
#include "latdev/benchmarks.hpp"
#include "latdev/json_io.hpp"
#include "latdev/version.hpp"

namespace py = pybind11;
using namespace latdev;

namespace {

State make_state(const ModelSpec& spec, const Vector& values) {
    return State(spec.window, values);
}

Control make_control(const ModelSpec& spec, const TimeGrid& grid, const Eigen::MatrixXd& values) {
    Control c(grid, spec.mode_count());
    if (values.rows() != grid.steps || values.cols() != spec.mode_count())
        throw DimensionMismatch("control array must be steps x modes");
    c.values = values;
    return c;
}

Trajectory make_trajectory(const ModelSpec& spec, const TimeGrid& grid,
                           const Eigen::MatrixXd& states) {
    Trajectory t(grid, spec.window);
    if (states.rows() != grid.steps + 1 || states.cols() != spec.window.site_count())
        throw DimensionMismatch("trajectory array must be (steps+1) x site_count");
    t.states = states;
    return t;
}

py::dict rate_dict(const RateEstimate& est) {
    py::dict d;
    d["cost"] = est.cost;
    d["residual"] = est.residual;
    d["converged"] = est.converged;
    d["feasible"] = est.feasible;
    d["iterations"] = est.iterations;
    d["grad_norm"] = est.grad_norm;
    d["control"] = est.control.values;
    return d;
}

RateOptions rate_options(const std::vector<double>& penalties, double grad_tol,
                         double residual_tol, int max_iterations) {
    RateOptions opt;
    if (!penalties.empty()) opt.penalties = penalties;
    opt.grad_tol = grad_tol;
    opt.residual_tol = residual_tol;
    opt.max_iterations = max_iterations;
    return opt;
}

}  // namespace

PYBIND11_MODULE(_latdev, m) {
    m.attr("__version__") = LATDEV_VERSION;

    py::register_exception<ConditionViolated>(m, "ConditionViolated");
    py::register_exception<TargetMismatch>(m, "TargetMismatch");
    py::register_exception<OraclePreconditionViolated>(m, "OraclePreconditionViolated");

    py::class_<LatticeWindow>(m, "Window")
        .def(py::init<int, int>(), py::arg("dim"), py::arg("radius"))
        .def_property_readonly("dim", &LatticeWindow::dim)
        .def_property_readonly("radius", &LatticeWindow::radius)
        .def_property_readonly("site_count", &LatticeWindow::site_count)
        .def_property_readonly("edge_count", &LatticeWindow::edge_count)
        .def("flat_index", &LatticeWindow::flat_index)
        .def("multi_index", &LatticeWindow::multi_index);

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, int>(), py::arg("horizon"), py::arg("steps"))
        .def_readonly("horizon", &TimeGrid::horizon)
        .def_readonly("steps", &TimeGrid::steps)
        .def_property_readonly("dt", &TimeGrid::dt);

    py::class_<ModelSpec>(m, "Model")
        .def_static("from_json",
                    [](const std::string& text) { return model_from_json(Json::parse(text)); })
        .def_static("ou_additive", &bench::ou_additive)
        .def_static("tanh_lattice", &bench::tanh_lattice)
        .def_property_readonly("window", [](const ModelSpec& s) { return s.window; })
        .def_property_readonly("mode_count", &ModelSpec::mode_count)
        .def_property_readonly("horizon", [](const ModelSpec& s) { return s.horizon; })
        .def("to_json", [](const ModelSpec& s) { return to_json(s).dump(2); })
        .def(
            "validate",
            [](const ModelSpec& s, double radius) {
                const ValidationReport rep = validate(s, radius);
                py::dict d;
                d["valid"] = rep.valid;
                py::list viols;
                for (const auto& v : rep.violations) {
                    py::dict vd;
                    vd["condition"] = v.condition;
                    vd["message"] = v.message;
                    viols.append(vd);
                }
                d["violations"] = viols;
                d["alpha"] = rep.alpha;
                d["delta_norm_sq"] = rep.delta_norm_sq;
                d["sigma_lipschitz"] = rep.sigma_lipschitz;
                d["min_f0_prime"] = rep.min_f0_prime;
                d["f_lipschitz"] = rep.f_lipschitz;
                d["g_l2_sq"] = rep.g_l2_sq;
                d["h_linf_sum"] = rep.h_linf_sum;
                return d;
            },
            py::arg("lipschitz_radius") = 5.0)
        .def("drift",
             [](const ModelSpec& s, double t, const Vector& u) {
                 return drift(s, t, make_state(s, u)).values;
             })
        .def("f",
             [](const ModelSpec& s, const Vector& u) { return f_eval(s, make_state(s, u)).values; })
        .def("sigma_k",
             [](const ModelSpec& s, int k, const Vector& u) {
                 return sigma_k_eval(s, k, make_state(s, u)).values;
             })
        .def("sigma_apply",
             [](const ModelSpec& s, double t, const Vector& u, const Vector& z) {
                 return sigma_apply(s, t, make_state(s, u), z).values;
             })
        .def("sigma_hs_norm_sq", [](const ModelSpec& s, double t, const Vector& u) {
            return sigma_hs_norm_sq(s, t, make_state(s, u));
        });

    m.def("apply_a",
          [](const LatticeWindow& w, const Vector& u) { return apply_A(State(w, u)).values; });
    m.def("apply_b", [](const LatticeWindow& w, int direction, const Vector& u) {
        return apply_B(direction, State(w, u)).values;
    });
    m.def("apply_b_star", [](const LatticeWindow& w, int direction, const Vector& values) {
        EdgeField e{w, direction, values};
        return apply_B_star(direction, e).values;
    });
    m.def("dirichlet_energy",
          [](const LatticeWindow& w, const Vector& u) { return dirichlet_energy(State(w, u)); });

    m.def(
        "simulate",
        [](const ModelSpec& spec, const TimeGrid& grid, double eps, uint64_t seed,
           const Vector& u0, std::optional<Eigen::MatrixXd> control, uint64_t sample,
           double stability_radius) {
            SdeConfig cfg;
            cfg.grid = grid;
            cfg.eps = eps;
            cfg.seed = seed;
            cfg.stability_radius = stability_radius;
            std::optional<Control> ctl;
            if (control) ctl = make_control(spec, grid, *control);
            return simulate(spec, cfg, make_state(spec, u0), ctl, sample).states;
        },
        py::arg("model"), py::arg("grid"), py::arg("eps"), py::arg("seed"), py::arg("u0"),
        py::arg("control") = std::nullopt, py::arg("sample") = 0,
        py::arg("stability_radius") = 8.0);

    m.def(
        "moment_sup_sq",
        [](const ModelSpec& spec, const TimeGrid& grid, double eps, uint64_t seed, long ensemble,
           const Vector& u0, int threads) {
            SdeConfig cfg;
            cfg.grid = grid;
            cfg.eps = eps;
            cfg.seed = seed;
            cfg.ensemble_size = ensemble;
            cfg.threads = threads;
            const MeanCI r = moment_sup_sq(spec, cfg, make_state(spec, u0));
            py::dict d;
            d["mean"] = r.mean;
            d["ci_low"] = r.ci_low;
            d["ci_high"] = r.ci_high;
            d["std_error"] = r.std_error;
            d["gronwall_bound"] = gronwall_moment_bound(spec, u0.squaredNorm(), 0.0);
            return d;
        },
        py::arg("model"), py::arg("grid"), py::arg("eps"), py::arg("seed"), py::arg("ensemble"),
        py::arg("u0"), py::arg("threads") = 1);

    m.def(
        "skeleton_solve",
        [](const ModelSpec& spec, const TimeGrid& grid, const Vector& u0,
           std::optional<Eigen::MatrixXd> control) {
            Control ctl(grid, spec.mode_count());
            if (control) ctl = make_control(spec, grid, *control);
            return solve(spec, grid, make_state(spec, u0), ctl).states;
        },
        py::arg("model"), py::arg("grid"), py::arg("u0"), py::arg("control") = std::nullopt);

    m.def(
        "apriori_bound",
        [](const ModelSpec& spec, const Vector& u0, const TimeGrid& grid,
           std::optional<Eigen::MatrixXd> control) {
            Control ctl(grid, spec.mode_count());
            if (control) ctl = make_control(spec, grid, *control);
            return apriori_bound(spec, make_state(spec, u0), ctl);
        },
        py::arg("model"), py::arg("u0"), py::arg("grid"), py::arg("control") = std::nullopt);

    m.def(
        "weak_convergence_probe",
        [](const ModelSpec& spec, const TimeGrid& grid, const Vector& u0, const Vector& w,
           const std::vector<int>& n_list) {
            const auto rows = weak_convergence_probe(spec, grid, make_state(spec, u0),
                                                     Control(grid, spec.mode_count()), w, n_list);
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["n"] = r.n;
                d["distance"] = r.distance;
                out.append(d);
            }
            return out;
        },
        py::arg("model"), py::arg("grid"), py::arg("u0"), py::arg("w"), py::arg("n_list"));

    m.def(
        "level_set_probe",
        [](const ModelSpec& spec, const TimeGrid& grid, const Vector& u0, double level,
           int samples, uint64_t seed, int threads) {
            const LevelSetReport rep =
                level_set_probe(spec, grid, make_state(spec, u0), level, samples, seed, threads);
            py::dict d;
            d["level"] = rep.level;
            d["samples"] = rep.samples;
            d["modulus"] = rep.modulus;
            d["tail"] = rep.tail;
            d["net_size"] = rep.net_size;
            d["net_radius"] = rep.net_radius;
            d["assignment"] = rep.assignment;
            return d;
        },
        py::arg("model"), py::arg("grid"), py::arg("u0"), py::arg("level"), py::arg("samples"),
        py::arg("seed"), py::arg("threads") = 1);

    m.def(
        "rate_estimate",
        [](const ModelSpec& spec, const Vector& u0, const TimeGrid& grid,
           const Eigen::MatrixXd& phi, const std::vector<double>& penalties, double grad_tol,
           double residual_tol, int max_iterations) {
            return rate_dict(rate_estimate(
                spec, make_state(spec, u0), make_trajectory(spec, grid, phi),
                rate_options(penalties, grad_tol, residual_tol, max_iterations)));
        },
        py::arg("model"), py::arg("u0"), py::arg("grid"), py::arg("phi"),
        py::arg("penalties") = std::vector<double>{}, py::arg("grad_tol") = 1e-8,
        py::arg("residual_tol") = 1e-6, py::arg("max_iterations") = 5000);

    m.def(
        "additive_oracle",
        [](const ModelSpec& spec, const Vector& u0, const TimeGrid& grid,
           const Eigen::MatrixXd& phi) {
            return rate_dict(
                additive_oracle(spec, make_state(spec, u0), make_trajectory(spec, grid, phi)));
        },
        py::arg("model"), py::arg("u0"), py::arg("grid"), py::arg("phi"));

    m.def(
        "endpoint_rate",
        [](const ModelSpec& spec, const TimeGrid& grid, const Vector& u0, const Vector& c,
           double level, const std::vector<double>& penalties) {
            RateOptions opt;
            opt.penalties = penalties.empty()
                                ? std::vector<double>{1e2, 1e3, 1e4, 1e5, 1e6, 1e7}
                                : penalties;
            return rate_dict(
                endpoint_rate(spec, grid, make_state(spec, u0), make_state(spec, c), level, opt));
        },
        py::arg("model"), py::arg("grid"), py::arg("u0"), py::arg("c"), py::arg("level"),
        py::arg("penalties") = std::vector<double>{});

    m.def(
        "tail_probability",
        [](const ModelSpec& spec, const TimeGrid& grid, double eps, uint64_t seed, long ensemble,
           const Vector& u0, const Vector& c, double level, int threads) {
            SdeConfig cfg;
            cfg.grid = grid;
            cfg.eps = eps;
            cfg.seed = seed;
            cfg.ensemble_size = ensemble;
            cfg.threads = threads;
            const TailResult tr =
                tail_probability(spec, cfg, make_state(spec, u0),
                                 EventSpec::endpoint_halfspace(make_state(spec, c), level));
            py::dict d;
            d["p_hat"] = tr.p_hat;
            d["ci_low"] = tr.ci_low;
            d["ci_high"] = tr.ci_high;
            d["zero_hits"] = tr.zero_hits;
            d["hits"] = tr.plain.hits;
            return d;
        },
        py::arg("model"), py::arg("grid"), py::arg("eps"), py::arg("seed"), py::arg("ensemble"),
        py::arg("u0"), py::arg("c"), py::arg("level"), py::arg("threads") = 1);

    m.def(
        "laplace_terminal_sq",
        [](const ModelSpec& spec, const TimeGrid& grid, double eps, uint64_t seed, long ensemble,
           const Vector& u0, int threads) {
            SdeConfig cfg;
            cfg.grid = grid;
            cfg.eps = eps;
            cfg.seed = seed;
            cfg.ensemble_size = ensemble;
            cfg.threads = threads;
            const LaplaceResult r =
                laplace_functional(spec, cfg, make_state(spec, u0), [](const Trajectory& p) {
                    return p.states.row(p.grid.steps).squaredNorm();
                });
            py::dict d;
            d["value"] = r.value;
            d["ci_half"] = r.ci_half;
            return d;
        },
        py::arg("model"), py::arg("grid"), py::arg("eps"), py::arg("seed"), py::arg("ensemble"),
        py::arg("u0"), py::arg("threads") = 1);

    m.def(
        "laplace_inf_terminal_sq",
        [](const ModelSpec& spec, const TimeGrid& grid, const Vector& u0) {
            TerminalObjective H;
            H.value = [](const State& uT) { return uT.values.squaredNorm(); };
            H.gradient = [](const State& uT) -> Vector { return 2.0 * uT.values; };
            const LaplaceInfResult r = laplace_inf(spec, grid, make_state(spec, u0), H);
            py::dict d;
            d["value"] = r.value;
            d["terminal"] = r.terminal;
            d["cost"] = r.cost;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("model"), py::arg("grid"), py::arg("u0"));

    m.def(
        "h1_probe",
        [](const ModelSpec& spec, const TimeGrid& grid, uint64_t seed, const Vector& u0,
           const Eigen::MatrixXd& control, const std::vector<double>& eps_list, long ensemble,
           int threads) {
            SdeConfig cfg;
            cfg.grid = grid;
            cfg.seed = seed;
            cfg.threads = threads;
            const auto rows = h1_probe(spec, cfg, make_state(spec, u0),
                                       make_control(spec, grid, control), eps_list, ensemble);
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["eps"] = r.eps;
                d["mean_distance"] = r.distance.mean;
                d["std_error"] = r.distance.std_error;
                out.append(d);
            }
            return out;
        },
        py::arg("model"), py::arg("grid"), py::arg("seed"), py::arg("u0"), py::arg("control"),
        py::arg("eps_list"), py::arg("ensemble"), py::arg("threads") = 1);

    m.def(
        "run_acceptance",
        [](uint64_t seed, int threads) {
            bench::BenchOptions opt;
            opt.seed = seed;
            opt.threads = threads;
            opt.verbose = false;
            py::list out;
            for (const auto& r : bench::run_acceptance(opt)) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 20260808, py::arg("threads") = 2);
}
