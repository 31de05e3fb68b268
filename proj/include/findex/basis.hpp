#pragma once

#include <string>

#include "findex/grid.hpp"

namespace findex {

// Orthonormal basis families of L2([0,1]) used by spectral kernels and
// covariance models. Indexing starts at 1; there is no constant member.
//
//   cosine:            sqrt(2) cos(i pi x)
//   sine_half_integer: sqrt(2) sin(pi (i - 1/2) x)   (Brownian eigenfunctions)
//   haar:              step wavelets on dyadic intervals, half-open convention
//   fourier_shifted:   normalized cos(omega_i pi x), omega_i = a*i + b, not integer
struct BasisFamily {
    enum class Kind { cosine, sine_half_integer, haar, fourier_shifted };

    Kind kind = Kind::cosine;
    // fourier_shifted frequency rule omega_i = a*i + b; defaults match the
    // Brownian eigenfunction frequencies.
    double a = 1.0;
    double b = -0.5;

    static BasisFamily cosine() { return {Kind::cosine}; }
    static BasisFamily sine_half_integer() { return {Kind::sine_half_integer}; }
    static BasisFamily haar() { return {Kind::haar}; }
    static BasisFamily fourier_shifted(double a, double b) {
        return {Kind::fourier_shifted, a, b};
    }

    bool operator==(const BasisFamily& other) const = default;
};

std::string to_string(BasisFamily::Kind kind);
BasisFamily::Kind basis_kind_from_string(const std::string& name);

// Pointwise evaluation of the index-th member at x in [0,1].
double basis_value(const BasisFamily& family, int index, double x);

// The index-th member sampled on a grid. Deterministic and pure.
GridFunction basis_eval(const BasisFamily& family, int index, const GridPtr& grid);

// Columns 1..M of the family sampled on a grid (m x M).
Eigen::MatrixXd basis_matrix(const BasisFamily& family, int M, const Grid& grid);

// Haar member decomposition: index = 2^j + l - 1 with l in 1..2^j.
struct HaarSupport {
    int level;       // j
    int translate;   // l
    double lo, mid, hi;
    double height;   // 2^(j/2)
};
HaarSupport haar_support(int index);

// Exact L2 inner product of two Haar members (piecewise-constant integration,
// no quadrature). Used as an oracle where trapezoid error would dominate.
double haar_inner_exact(int index_a, int index_b);

}  // namespace findex
