#include "latdev/rate.hpp"

#include <cmath>
#include <limits>

namespace latdev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Forward explicit Euler with the control as drift; the adjoint below is the
// exact transpose of this recursion, so gradients are exact for the discrete
// objective.
bool euler_forward(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                   const Eigen::MatrixXd& v, Trajectory& path) {
    const double dt = grid.dt();
    const Polynomial f = spec.drift.f();
    const int K = static_cast<int>(v.cols());
    Vector vm = Vector::Zero(K);
    State u = u0;
    State rhs = State::zero(spec.window);
    path = Trajectory(grid, spec.window);
    path.set(0, u);
    for (int m = 0; m < grid.steps; ++m) {
        const double t = grid.node(m);
        drift_into(spec, f, t, u, rhs);
        if (K > 0) {
            vm = v.row(m);
            sigma_apply_add(spec, t, u, vm, 1.0, rhs);
        }
        u.values += dt * rhs.values;
        if (!u.values.allFinite()) return false;
        path.set(m + 1, u);
    }
    return true;
}

struct ObjectiveSpec {
    const Trajectory* phi = nullptr;  // running tracking penalty, nodes 1..M
    double penalty = 0.0;
    const TerminalObjective* terminal = nullptr;
    double terminal_weight = 0.0;
};

double objective_and_gradient(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                              const Eigen::MatrixXd& v, const ObjectiveSpec& obj,
                              Eigen::MatrixXd& grad, Trajectory* path_out) {
    const int M = grid.steps;
    const int K = spec.mode_count();
    const double dt = grid.dt();

    Trajectory path;
    if (!euler_forward(spec, grid, u0, v, path)) {
        grad.setZero(M, K);
        return kInf;
    }
    if (path_out) *path_out = path;

    double J = 0.5 * dt * v.squaredNorm();
    if (obj.phi) {
        for (int m = 1; m <= M; ++m)
            J += obj.penalty * dt * (path.states.row(m) - obj.phi->states.row(m)).squaredNorm();
    }
    State uT = path.at(M);
    if (obj.terminal) J += obj.terminal_weight * obj.terminal->value(uT);

    const Polynomial fprime = spec.drift.f().derivative();
    grad.resize(M, K);

    Vector a = Vector::Zero(spec.window.site_count());
    if (obj.phi)
        a = (2.0 * obj.penalty * dt) *
            (path.states.row(M) - obj.phi->states.row(M)).transpose();
    if (obj.terminal) a += obj.terminal_weight * obj.terminal->gradient(uT);

    State um = State::zero(spec.window);
    State acopy = State::zero(spec.window);
    State lap = State::zero(spec.window);
    Vector da = Vector::Zero(spec.window.site_count());
    for (int m = M - 1; m >= 0; --m) {
        const double t = grid.node(m);
        um.values = path.states.row(m).transpose();

        // Gradient block: dt (v_{m,k} + (h_k(t_m) + sigma_k(u_m)) . a).
        for (int k = 0; k < K; ++k) {
            const ModeSpec& mode = spec.noise.modes[k];
            double dot = 0.0;
            for (const ForcingTerm& term : mode.h.terms) dot += term.wave(t) * a[term.flat];
            for (const DeltaEntry& d : mode.delta)
                dot += d.value * mode.sigma0(um.values[d.flat]) * a[d.flat];
            grad(m, k) = dt * (v(m, k) + dot);
        }

        // a <- a + dt D_m^T a (+ running penalty); D_m is symmetric.
        acopy.values = a;
        apply_A_into(acopy, lap);
        da = -spec.drift.nu * lap.values - spec.drift.gamma * a;
        for (long i = 0; i < da.size(); ++i) da[i] -= fprime(um.values[i]) * a[i];
        for (int k = 0; k < K; ++k) {
            const double vk = v(m, k);
            if (vk == 0.0) continue;
            const ModeSpec& mode = spec.noise.modes[k];
            for (const DeltaEntry& d : mode.delta)
                da[d.flat] += vk * d.value * mode.sigma0.derivative(um.values[d.flat]) * a[d.flat];
        }
        a += dt * da;
        if (obj.phi && m >= 1)
            a += 2.0 * obj.penalty * dt *
                 (path.states.row(m) - obj.phi->states.row(m)).transpose();
    }
    return J;
}

void check_target(const ModelSpec& spec, const State& u0, const Trajectory& phi) {
    if (phi.window != spec.window) throw DimensionMismatch("target path window mismatch");
    const double gap = (phi.states.row(0).transpose() - u0.values).norm();
    if (gap > 1e-9 * std::max(1.0, u0.norm()))
        throw TargetMismatch("target path starts at distance " + std::to_string(gap) +
                             " from u0; the rate of such a path is infinite by definition");
}

RateEstimate run_stages(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                        const std::function<ObjectiveSpec(double)>& stage_objective,
                        const std::vector<double>& stages, const RateOptions& options,
                        std::vector<IterationRecord>* trace,
                        const std::function<double(const Trajectory&)>& residual_of) {
    const int M = grid.steps;
    const int K = spec.mode_count();

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(M, K);
    RateEstimate est;
    bool grad_ok = false;

    LbfgsOptions lopt;
    lopt.memory = options.lbfgs_memory;
    lopt.grad_tol = options.grad_tol;
    lopt.max_iterations = options.max_iterations;

    for (size_t stage = 0; stage < stages.size(); ++stage) {
        const ObjectiveSpec obj = stage_objective(stages[stage]);
        auto fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
            const Eigen::MatrixXd vm =
                Eigen::Map<const Eigen::MatrixXd>(x.data(), M, K);
            Eigen::MatrixXd gm;
            const double J = objective_and_gradient(spec, grid, u0, vm, obj, gm, nullptr);
            g = Eigen::Map<Eigen::VectorXd>(gm.data(), gm.size());
            return J;
        };
        Eigen::VectorXd x0 = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
        LbfgsResult lr = lbfgs_minimize(fg, std::move(x0), lopt);
        v = Eigen::Map<Eigen::MatrixXd>(lr.x.data(), M, K);
        est.iterations += lr.iterations;
        grad_ok = lr.converged;
        est.grad_norm = lr.grad_norm;

        if (trace) {
            Trajectory path;
            Eigen::MatrixXd gm;
            objective_and_gradient(spec, grid, u0, v, obj, gm, &path);
            Control ctl(grid, K);
            ctl.values = v;
            trace->push_back({static_cast<int>(stage), stages[stage], lr.iterations, lr.f,
                              lr.grad_norm, ctl.cost(), residual_of(path)});
        }
    }

    est.control = Control(grid, K);
    est.control.values = v;
    est.cost = est.control.cost();

    Trajectory path;
    euler_forward(spec, grid, u0, v, path);
    est.residual = residual_of(path);
    est.converged = grad_ok && est.residual < options.residual_tol;
    return est;
}

}  // namespace

double adjoint_gradient(const ModelSpec& spec, const State& u0, const Trajectory& phi,
                        const Control& v, double penalty, Eigen::MatrixXd& grad,
                        Trajectory* path_out) {
    check_target(spec, u0, phi);
    check_same_grid(v.grid, phi.grid, "adjoint_gradient");
    ObjectiveSpec obj;
    obj.phi = &phi;
    obj.penalty = penalty;
    return objective_and_gradient(spec, phi.grid, u0, v.values, obj, grad, path_out);
}

RateEstimate rate_estimate(const ModelSpec& spec, const State& u0, const Trajectory& phi,
                           const RateOptions& options, std::vector<IterationRecord>* trace) {
    check_target(spec, u0, phi);
    auto stage_obj = [&phi](double lambda) {
        ObjectiveSpec obj;
        obj.phi = &phi;
        obj.penalty = lambda;
        return obj;
    };
    auto residual = [&phi](const Trajectory& path) { return sup_distance(path, phi); };
    return run_stages(spec, phi.grid, u0, stage_obj, options.penalties, options, trace, residual);
}

RateEstimate additive_oracle(const ModelSpec& spec, const State& u0, const Trajectory& phi,
                             double infeasibility_tol) {
    for (const ModeSpec& mode : spec.noise.modes)
        if (mode.sigma0.kind != Sigma0::Kind::zero)
            throw OraclePreconditionViolated(
                "additive oracle requires every mode to have sigma0 = zero");
    check_target(spec, u0, phi);

    const TimeGrid& grid = phi.grid;
    const int M = grid.steps;
    const int K = spec.mode_count();
    const long sites = spec.window.site_count();
    const double dt = grid.dt();
    const Polynomial f = spec.drift.f();

    RateEstimate est;
    est.control = Control(grid, K);

    for (int m = 0; m < M; ++m) {
        const double t = grid.node(m);
        const State um = phi.at(m);

        // Explicit-Euler defect the control has to supply at this node.
        State r(spec.window,
                ((phi.states.row(m + 1) - phi.states.row(m)) / dt).transpose());
        const State lap = apply_A(um);
        for (long i = 0; i < sites; ++i)
            r.values[i] += spec.drift.nu * lap.values[i] + f(um.values[i]) +
                           spec.drift.gamma * um.values[i];
        spec.drift.g.add_to(t, r, -1.0);

        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(sites, K);
        for (int k = 0; k < K; ++k)
            for (const ForcingTerm& term : spec.noise.modes[k].h.terms)
                H(term.flat, k) += term.wave(t);

        Vector vm = Vector::Zero(K);
        double defect;
        if (K > 0) {
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(H);
            vm = cod.solve(r.values);
            defect = (H * vm - r.values).norm();
        } else {
            defect = r.values.norm();
        }
        if (defect > infeasibility_tol) est.feasible = false;
        est.control.values.row(m) = vm.transpose();
    }

    if (!est.feasible) {
        est.cost = kInf;
        est.residual = kInf;
        est.converged = false;
        return est;
    }

    est.cost = est.control.cost();
    Trajectory path;
    euler_forward(spec, grid, u0, est.control.values, path);
    est.residual = sup_distance(path, phi);
    est.converged = true;
    return est;
}

RateEstimate minimize_terminal(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                               const TerminalObjective& objective, bool continuation,
                               const RateOptions& options,
                               std::vector<IterationRecord>* trace) {
    std::vector<double> stages = continuation ? options.penalties : std::vector<double>{1.0};
    auto stage_obj = [&objective](double weight) {
        ObjectiveSpec obj;
        obj.terminal = &objective;
        obj.terminal_weight = weight;
        return obj;
    };
    auto residual = [&](const Trajectory&) { return 0.0; };
    RateEstimate est =
        run_stages(spec, grid, u0, stage_obj, stages, options, trace, residual);
    est.converged = est.grad_norm < options.grad_tol;
    return est;
}

RateEstimate endpoint_rate(const ModelSpec& spec, const TimeGrid& grid, const State& u0,
                           const State& c, double level, const RateOptions& options,
                           std::vector<IterationRecord>* trace) {
    if (c.window != spec.window) throw DimensionMismatch("endpoint_rate: c window mismatch");

    TerminalObjective hinge;
    hinge.value = [&c, level](const State& uT) {
        const double gap = std::max(0.0, level - c.values.dot(uT.values));
        return gap * gap;
    };
    hinge.gradient = [&c, level](const State& uT) -> Vector {
        const double gap = std::max(0.0, level - c.values.dot(uT.values));
        return (-2.0 * gap) * c.values;
    };

    auto stage_obj = [&hinge](double mu) {
        ObjectiveSpec obj;
        obj.terminal = &hinge;
        obj.terminal_weight = mu;
        return obj;
    };
    auto residual = [&](const Trajectory& path) {
        return std::max(0.0, level - c.values.dot(path.states.row(grid.steps).transpose()));
    };
    return run_stages(spec, grid, u0, stage_obj, options.penalties, options, trace, residual);
}

}  // namespace latdev
