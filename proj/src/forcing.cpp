#include "latdev/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace latdev {

double Waveform::operator()(double t) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::sinusoid:
            return amplitude * std::cos(omega * t + phase);
        case Kind::table: {
            if (times.empty() || t < times.front()) return 0.0;
            auto it = std::upper_bound(times.begin(), times.end(), t);
            return values[static_cast<size_t>(it - times.begin()) - 1];
        }
    }
    return 0.0;
}

double Waveform::sup_abs() const {
    switch (kind) {
        case Kind::constant:
            return std::abs(value);
        case Kind::sinusoid:
            return std::abs(amplitude);
        case Kind::table: {
            double m = 0.0;
            for (double v : values) m = std::max(m, std::abs(v));
            return m;
        }
    }
    return 0.0;
}

Waveform Waveform::constant(double c) {
    Waveform w;
    w.kind = Kind::constant;
    w.value = c;
    return w;
}

Waveform Waveform::sinusoid(double a, double omega, double phase) {
    Waveform w;
    w.kind = Kind::sinusoid;
    w.amplitude = a;
    w.omega = omega;
    w.phase = phase;
    return w;
}

Waveform Waveform::table(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.empty() || times.front() != 0.0)
        throw ConfigError("waveform table needs equal-length times/values with times[0] == 0");
    if (!std::is_sorted(times.begin(), times.end()))
        throw ConfigError("waveform table times must be increasing");
    Waveform w;
    w.kind = Kind::table;
    w.times = std::move(times);
    w.values = std::move(values);
    return w;
}

void ForcingSpec::bind(const LatticeWindow& window) {
    for (ForcingTerm& term : terms) term.flat = window.flat_index(term.site);
}

void ForcingSpec::add_to(double t, State& out, double scale) const {
    for (const ForcingTerm& term : terms) out.values[term.flat] += scale * term.wave(t);
}

State ForcingSpec::eval(double t, const LatticeWindow& window) const {
    State s = State::zero(window);
    add_to(t, s);
    return s;
}

double ForcingSpec::sup_norm_bound() const {
    std::map<long, double> per_site;
    for (const ForcingTerm& term : terms) per_site[term.flat] += term.wave.sup_abs();
    double acc = 0.0;
    for (const auto& [flat, bound] : per_site) acc += bound * bound;
    return std::sqrt(acc);
}

namespace {

double simpson(const std::vector<const Waveform*>& waves, double a, double b) {
    constexpr int kPanels = 512;
    const double h = (b - a) / kPanels;
    auto sq = [&](double t) {
        double v = 0.0;
        for (const Waveform* w : waves) v += (*w)(t);
        return v * v;
    };
    // Right-continuous tables: keep the right endpoint inside this segment.
    double acc = sq(a) + sq(std::nextafter(b, a));
    for (int i = 1; i < kPanels; ++i) acc += (i % 2 ? 4.0 : 2.0) * sq(a + i * h);
    return acc * h / 3.0;
}

}  // namespace

double ForcingSpec::integral_sq(double horizon) const {
    // Group waveforms by site; cross terms within a site are handled by
    // squaring the summed signal.
    std::map<long, std::vector<const Waveform*>> per_site;
    std::vector<double> cuts{0.0, horizon};
    for (const ForcingTerm& term : terms) {
        per_site[term.flat].push_back(&term.wave);
        if (term.wave.kind == Waveform::Kind::table)
            for (double t : term.wave.times)
                if (t > 0.0 && t < horizon) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double acc = 0.0;
    for (const auto& [flat, waves] : per_site)
        for (size_t k = 0; k + 1 < cuts.size(); ++k) acc += simpson(waves, cuts[k], cuts[k + 1]);
    return acc;
}

}  // namespace latdev
