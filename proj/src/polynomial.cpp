#include "latdev/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latdev {

namespace {
constexpr double kTiny = 1e-14;
}

Polynomial::Polynomial(std::vector<double> ascending_coeffs) : coeffs_(std::move(ascending_coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

int Polynomial::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

double Polynomial::coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
}

double Polynomial::leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (int k = degree(); k >= 0; --k) acc = acc * x + coeffs_[k];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

namespace {

double cauchy_root_bound(const Polynomial& p) {
    double bound = 0.0;
    for (int k = 0; k < p.degree(); ++k)
        bound = std::max(bound, std::abs(p.coeff(k) / p.leading()));
    return 1.0 + bound;
}

double bisect(const Polynomial& p, double lo, double hi) {
    double flo = p(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p(mid);
        if (fm == 0.0 || hi - lo < kTiny * std::max(1.0, std::abs(mid))) return mid;
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> real_roots(const Polynomial& p) {
    if (p.degree() <= 0) return {};
    if (p.degree() == 1) return {-p.coeff(0) / p.coeff(1)};

    // Critical points split R into intervals where p is monotone.
    std::vector<double> breaks = real_roots(p.derivative());
    const double bound = cauchy_root_bound(p);
    std::vector<double> pts;
    pts.push_back(-bound);
    for (double b : breaks)
        if (b > -bound && b < bound) pts.push_back(b);
    pts.push_back(bound);

    std::vector<double> roots;
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
        const double a = pts[k], b = pts[k + 1];
        const double fa = p(a), fb = p(b);
        if (fa == 0.0) roots.push_back(a);
        if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) roots.push_back(bisect(p, a, b));
    }
    if (p(pts.back()) == 0.0) roots.push_back(pts.back());

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < kTiny; }),
                roots.end());
    return roots;
}

double global_min(const Polynomial& p) {
    const double inf = std::numeric_limits<double>::infinity();
    if (p.is_zero()) return 0.0;
    if (p.degree() == 0) return p.coeff(0);
    if (p.degree() % 2 == 1 || p.leading() < 0.0) return -inf;
    double best = inf;
    for (double c : real_roots(p.derivative())) best = std::min(best, p(c));
    return best;
}

double max_abs_on_interval(const Polynomial& p, double lo, double hi) {
    double best = std::max(std::abs(p(lo)), std::abs(p(hi)));
    for (double c : real_roots(p.derivative()))
        if (c >= lo && c <= hi) best = std::max(best, std::abs(p(c)));
    return best;
}

}  // namespace latdev
