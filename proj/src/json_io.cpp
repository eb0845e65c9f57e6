#include "latdev/json_io.hpp"

#include <fstream>

#include "latdev/skeleton.hpp"

namespace latdev {

const Json& require_field(const Json& j, const std::string& key, const std::string& context) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(context + ": missing field '" + key + "'");
    return j.at(key);
}

double require_number(const Json& j, const std::string& key, const std::string& context) {
    const Json& v = require_field(j, key, context);
    if (!v.is_number()) throw ConfigError(context + "." + key + ": expected a number");
    return v.get<double>();
}

namespace {

std::vector<int> site_from_json(const Json& j, const std::string& context) {
    if (!j.is_array()) throw ConfigError(context + ": site must be an array of integers");
    std::vector<int> site;
    for (const Json& c : j) site.push_back(c.get<int>());
    return site;
}

Waveform waveform_from_json(const Json& j, const std::string& context) {
    const std::string kind = require_field(j, "kind", context).get<std::string>();
    if (kind == "constant") return Waveform::constant(require_number(j, "value", context));
    if (kind == "sinusoid") {
        Waveform w = Waveform::sinusoid(require_number(j, "amplitude", context),
                                        require_number(j, "omega", context));
        if (j.contains("phase")) w.phase = j.at("phase").get<double>();
        return w;
    }
    if (kind == "table") {
        return Waveform::table(require_field(j, "times", context).get<std::vector<double>>(),
                               require_field(j, "values", context).get<std::vector<double>>());
    }
    throw ConfigError(context + ": unknown waveform kind '" + kind + "'");
}

Json waveform_to_json(const Waveform& w) {
    switch (w.kind) {
        case Waveform::Kind::constant:
            return {{"kind", "constant"}, {"value", w.value}};
        case Waveform::Kind::sinusoid:
            return {{"kind", "sinusoid"},
                    {"amplitude", w.amplitude},
                    {"omega", w.omega},
                    {"phase", w.phase}};
        case Waveform::Kind::table:
            return {{"kind", "table"}, {"times", w.times}, {"values", w.values}};
    }
    return {};
}

ForcingSpec forcing_from_json(const Json& j, const std::string& context) {
    ForcingSpec spec;
    if (j.is_null()) return spec;
    if (!j.is_array()) throw ConfigError(context + ": expected an array of forcing terms");
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string ctx = context + "[" + std::to_string(i) + "]";
        ForcingTerm term;
        term.site = site_from_json(require_field(j[i], "site", ctx), ctx);
        term.wave = waveform_from_json(require_field(j[i], "waveform", ctx), ctx);
        spec.terms.push_back(std::move(term));
    }
    return spec;
}

Json forcing_to_json(const ForcingSpec& f) {
    Json arr = Json::array();
    for (const ForcingTerm& t : f.terms)
        arr.push_back({{"site", t.site}, {"waveform", waveform_to_json(t.wave)}});
    return arr;
}

Sigma0 sigma0_from_json(const Json& j, const std::string& context) {
    Sigma0 s;
    const std::string kind = require_field(j, "kind", context).get<std::string>();
    if (kind == "zero") {
        s.kind = Sigma0::Kind::zero;
        return s;
    }
    s.scale = require_number(j, "scale", context);
    if (kind == "linear")
        s.kind = Sigma0::Kind::linear;
    else if (kind == "tanh")
        s.kind = Sigma0::Kind::tanh;
    else
        throw ConfigError(context + ": unknown sigma0 kind '" + kind + "'");
    return s;
}

Json sigma0_to_json(const Sigma0& s) {
    switch (s.kind) {
        case Sigma0::Kind::zero:
            return {{"kind", "zero"}};
        case Sigma0::Kind::linear:
            return {{"kind", "linear"}, {"scale", s.scale}};
        case Sigma0::Kind::tanh:
            return {{"kind", "tanh"}, {"scale", s.scale}};
    }
    return {};
}

}  // namespace

LatticeWindow window_from_json(const Json& j) {
    const int dim = static_cast<int>(require_number(j, "dim", "window"));
    const int radius = static_cast<int>(require_number(j, "radius", "window"));
    return LatticeWindow(dim, radius);
}

Json to_json(const LatticeWindow& w) { return {{"dim", w.dim()}, {"radius", w.radius()}}; }

ModelSpec model_from_json(const Json& j) {
    ModelSpec spec;
    spec.window = window_from_json(require_field(j, "window", "model"));
    spec.horizon = require_number(j, "horizon", "model");

    const Json& drift = require_field(j, "drift", "model");
    spec.drift.nu = require_number(drift, "nu", "model.drift");
    spec.drift.gamma = require_number(drift, "gamma", "model.drift");
    if (drift.contains("f0_coeffs"))
        spec.drift.f0 = Polynomial(drift.at("f0_coeffs").get<std::vector<double>>());
    if (drift.contains("g")) spec.drift.g = forcing_from_json(drift.at("g"), "model.drift.g");

    if (j.contains("noise")) {
        const Json& noise = require_field(j, "noise", "model");
        const Json& modes = require_field(noise, "modes", "model.noise");
        for (size_t k = 0; k < modes.size(); ++k) {
            const std::string ctx = "model.noise.modes[" + std::to_string(k) + "]";
            ModeSpec mode;
            mode.sigma0 = sigma0_from_json(require_field(modes[k], "sigma0", ctx), ctx);
            if (modes[k].contains("delta")) {
                for (const Json& d : modes[k].at("delta")) {
                    DeltaEntry entry;
                    entry.site = site_from_json(require_field(d, "site", ctx + ".delta"), ctx);
                    entry.value = require_number(d, "value", ctx + ".delta");
                    mode.delta.push_back(std::move(entry));
                }
            }
            if (modes[k].contains("h"))
                mode.h = forcing_from_json(modes[k].at("h"), ctx + ".h");
            spec.noise.modes.push_back(std::move(mode));
        }
    }
    spec.bind();
    return spec;
}

Json to_json(const ModelSpec& spec) {
    Json modes = Json::array();
    for (const ModeSpec& m : spec.noise.modes) {
        Json delta = Json::array();
        for (const DeltaEntry& d : m.delta)
            delta.push_back({{"site", d.site}, {"value", d.value}});
        modes.push_back({{"sigma0", sigma0_to_json(m.sigma0)},
                         {"delta", delta},
                         {"h", forcing_to_json(m.h)}});
    }
    return {{"window", to_json(spec.window)},
            {"horizon", spec.horizon},
            {"drift",
             {{"nu", spec.drift.nu},
              {"gamma", spec.drift.gamma},
              {"f0_coeffs", spec.drift.f0.coeffs()},
              {"g", forcing_to_json(spec.drift.g)}}},
            {"noise", {{"modes", modes}}}};
}

State state_from_json(const Json& j, const LatticeWindow& window) {
    State s = State::zero(window);
    if (j.is_array()) {
        for (const Json& e : j) {
            const std::vector<int> site = site_from_json(require_field(e, "site", "state"), "state");
            s.values[window.flat_index(site)] = require_number(e, "value", "state");
        }
        return s;
    }
    const std::vector<double> values =
        require_field(j, "values", "state").get<std::vector<double>>();
    if (static_cast<long>(values.size()) != window.site_count())
        throw ConfigError("state.values has length " + std::to_string(values.size()) +
                          ", window has " + std::to_string(window.site_count()) + " sites");
    for (long i = 0; i < window.site_count(); ++i) s.values[i] = values[static_cast<size_t>(i)];
    return s;
}

Json to_json(const State& s) {
    return {{"window", to_json(s.window)},
            {"values", std::vector<double>(s.values.data(), s.values.data() + s.values.size())}};
}

TimeGrid grid_from_json(const Json& j, double default_horizon) {
    const int steps = static_cast<int>(require_number(j, "steps", "grid"));
    const double horizon =
        j.contains("horizon") ? j.at("horizon").get<double>() : default_horizon;
    return TimeGrid(horizon, steps);
}

Json to_json(const TimeGrid& g) { return {{"horizon", g.horizon}, {"steps", g.steps}}; }

Control control_from_json(const Json& j, const TimeGrid& grid, int modes) {
    Control c(grid, modes);
    if (j.is_null()) return c;
    const std::string kind =
        j.contains("kind") ? j.at("kind").get<std::string>() : std::string("nodes");
    if (kind == "zero") return c;
    if (kind == "constant") {
        const std::vector<double> v = require_field(j, "value", "control").get<std::vector<double>>();
        if (static_cast<int>(v.size()) != modes)
            throw ConfigError("control.value must have one entry per mode");
        for (int m = 0; m < grid.steps; ++m)
            for (int k = 0; k < modes; ++k) c.values(m, k) = v[static_cast<size_t>(k)];
        return c;
    }
    if (kind == "nodes") {
        const Json& rows = require_field(j, "values", "control");
        if (static_cast<int>(rows.size()) != grid.steps)
            throw ConfigError("control.values must have one row per step (" +
                              std::to_string(grid.steps) + ")");
        for (int m = 0; m < grid.steps; ++m) {
            const std::vector<double> row = rows[m].get<std::vector<double>>();
            if (static_cast<int>(row.size()) != modes)
                throw ConfigError("control.values rows must have one entry per mode");
            for (int k = 0; k < modes; ++k) c.values(m, k) = row[static_cast<size_t>(k)];
        }
        return c;
    }
    throw ConfigError("unknown control kind '" + kind + "'");
}

Json to_json(const Control& c) {
    Json rows = Json::array();
    for (int m = 0; m < c.grid.steps; ++m) {
        Json row = Json::array();
        for (int k = 0; k < c.modes(); ++k) row.push_back(c.values(m, k));
        rows.push_back(row);
    }
    return {{"kind", "nodes"}, {"grid", to_json(c.grid)}, {"values", rows}};
}

Trajectory trajectory_from_json(const Json& j) {
    const TimeGrid grid = grid_from_json(require_field(j, "grid", "trajectory"), 0.0);
    const LatticeWindow window = window_from_json(require_field(j, "window", "trajectory"));
    Trajectory t(grid, window);
    const Json& states = require_field(j, "states", "trajectory");
    if (static_cast<int>(states.size()) != grid.steps + 1)
        throw ConfigError("trajectory.states must have steps+1 rows");
    for (int m = 0; m <= grid.steps; ++m) {
        const std::vector<double> row = states[m].get<std::vector<double>>();
        if (static_cast<long>(row.size()) != window.site_count())
            throw ConfigError("trajectory.states rows must match the window site count");
        for (long i = 0; i < window.site_count(); ++i) t.states(m, i) = row[static_cast<size_t>(i)];
    }
    return t;
}

Json to_json(const Trajectory& t) {
    Json states = Json::array();
    for (int m = 0; m <= t.grid.steps; ++m) {
        Json row = Json::array();
        for (long i = 0; i < t.window.site_count(); ++i) row.push_back(t.states(m, i));
        states.push_back(row);
    }
    return {{"grid", to_json(t.grid)}, {"window", to_json(t.window)}, {"states", states}};
}

EventSpec event_from_json(const Json& j, const ModelSpec& spec, const TimeGrid& grid) {
    const std::string kind = require_field(j, "kind", "event").get<std::string>();
    if (kind == "always") return EventSpec::always();
    if (kind == "endpoint_halfspace") {
        return EventSpec::endpoint_halfspace(
            state_from_json(require_field(j, "c", "event"), spec.window),
            require_number(j, "level", "event"));
    }
    if (kind == "supball_exit") {
        const Json& ref = require_field(j, "phi_ref", "event");
        Trajectory phi;
        if (ref.is_string() && ref.get<std::string>() == "unforced") {
            const State u0 = j.contains("u0") ? state_from_json(j.at("u0"), spec.window)
                                              : State::zero(spec.window);
            phi = solve_unforced(spec, grid, u0);
        } else {
            phi = trajectory_from_json(ref);
        }
        return EventSpec::supball_exit(std::move(phi), require_number(j, "level", "event"));
    }
    throw ConfigError("unknown event kind '" + kind + "'");
}

Json to_json(const ValidationReport& rep) {
    Json violations = Json::array();
    for (const ValidationIssue& v : rep.violations)
        violations.push_back({{"condition", v.condition}, {"message", v.message}});
    return {{"valid", rep.valid},
            {"violations", violations},
            {"alpha", rep.alpha},
            {"delta_norm_sq", rep.delta_norm_sq},
            {"sigma_lipschitz", rep.sigma_lipschitz},
            {"min_f0_prime", rep.min_f0_prime},
            {"lipschitz_radius", rep.lipschitz_radius},
            {"f_lipschitz", rep.f_lipschitz},
            {"g_l2_sq", rep.g_l2_sq},
            {"h_linf_sum", rep.h_linf_sum}};
}

Json to_json(const RateEstimate& est) {
    return {{"cost", est.feasible ? Json(est.cost) : Json("infinity")},
            {"feasible", est.feasible},
            {"residual", est.residual},
            {"converged", est.converged},
            {"iterations", est.iterations},
            {"grad_norm", est.grad_norm},
            {"control", to_json(est.control)}};
}

Json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("parse error in '" + path + "': " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace latdev
