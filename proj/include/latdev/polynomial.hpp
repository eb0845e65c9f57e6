#ifndef LATDEV_POLYNOMIAL_HPP
#define LATDEV_POLYNOMIAL_HPP

#include <vector>

namespace latdev {

// Dense real polynomial, ascending coefficients. Trailing zeros are trimmed,
// so degree() reflects the true leading term.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending_coeffs);

    int degree() const;  // -1 for the zero polynomial
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double coeff(int k) const;
    double leading() const;

    double operator()(double x) const;
    Polynomial derivative() const;

private:
    std::vector<double> coeffs_;
};

// All real roots, ascending, found by recursive derivative isolation and
// bisection. Multiple roots are reported once.
std::vector<double> real_roots(const Polynomial& p);

// Global minimum over R. Returns -inf when the polynomial is unbounded below
// (odd degree, or negative leading coefficient).
double global_min(const Polynomial& p);

// max of |p| over [lo, hi], attained at an endpoint or a critical point.
double max_abs_on_interval(const Polynomial& p, double lo, double hi);

}  // namespace latdev

#endif
