#pragma once

#include <optional>
#include <variant>

#include "findex/basis.hpp"
#include "findex/grid.hpp"

namespace findex {

// Truncated spectral kernel k(x,y) = sum_{i<=M} a_i phi_i(x) phi_i(y) with
// (phi_i) orthonormal. Eigenvalues are stored in the orthonormal-basis
// convention throughout.
struct SpectralKernel {
    BasisFamily basis;
    Eigen::VectorXd eigenvalues;  // a_1 >= a_2 >= ... > 0
    std::optional<double> decay_exponent;  // t with a_i ~ i^-t, when known

    int truncation() const { return static_cast<int>(eigenvalues.size()); }
};

// Closed-form periodic Sobolev kernel
//   k(x,y) = -(1/3) [ B4({x+y}) + B4(|x-y|) ],  B4(u) = u^4 - 2u^3 + u^2 - 1/30,
// with {.} the fractional part (periodic extension of the first argument).
struct Bernoulli4Kernel {};

using Kernel = std::variant<SpectralKernel, Bernoulli4Kernel>;

// Fourth Bernoulli polynomial on [0,1].
double bernoulli_b4(double u);

// a_i = i^-t for i = 1..M (orthonormal convention). Requires t > 1.
SpectralKernel power_law_kernel(double t, int M, const BasisFamily& basis);

double kernel_eval(const Kernel& kernel, double x, double y);

// Pointwise kernel matrix [k(x_p, x_q)] on a grid.
Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const Grid& grid);

// Integral operator (Tf)(x_j) = sum_l w_l k(x_j, x_l) f(x_l).
GridFunction apply_T(const Kernel& kernel, const GridFunction& f);

const SpectralKernel* as_spectral(const Kernel& kernel);

}  // namespace findex
