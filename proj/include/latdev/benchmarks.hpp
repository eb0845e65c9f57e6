#ifndef LATDEV_BENCHMARKS_HPP
#define LATDEV_BENCHMARKS_HPP

#include "latdev/model.hpp"

namespace latdev::bench {

// Single-site linear model with one additive mode: du = -u dt + sqrt(eps) dW
// (a = 2 N nu = 1). Closed-form mean, variance, endpoint tails and Laplace
// values make it the main quantitative benchmark.
ModelSpec ou_additive();

// Five-site window with cubic drift (F0 = s^3 - s, gamma = -1, so f = s^3),
// constant forcing and two noise modes, one tanh-multiplicative and one
// linear-multiplicative. Exercises every nonlinear path in the code.
ModelSpec tanh_lattice();

}  // namespace latdev::bench

#endif
