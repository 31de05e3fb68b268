#include "findex/kernels.hpp"

#include <cmath>

namespace findex {

double bernoulli_b4(double u) {
    return ((u - 2.0) * u + 1.0) * u * u - 1.0 / 30.0;
}

SpectralKernel power_law_kernel(double t, int M, const BasisFamily& basis) {
    if (t <= 1.0)
        throw std::invalid_argument(
            "power_law_kernel: t must exceed 1 (trace class), got " +
            std::to_string(t));
    if (M < 1) throw std::invalid_argument("power_law_kernel: M must be >= 1");
    SpectralKernel k;
    k.basis = basis;
    k.eigenvalues.resize(M);
    for (int i = 1; i <= M; ++i) k.eigenvalues[i - 1] = std::pow(i, -t);
    k.decay_exponent = t;
    return k;
}

namespace {

void check_domain(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
        throw std::invalid_argument("kernel_eval: coordinates must lie in [0,1]");
}

double bernoulli4_eval(double x, double y) {
    // Half-arguments make the Mercer expansion come out in integer cosine
    // frequencies: sum_i 2 (i pi)^-4 cos(i pi x) cos(i pi y) telescopes to
    // -(1/3)[B4((x+y)/2) + B4(|x-y|/2)] via the period-1 Fourier series of B4.
    return -(bernoulli_b4((x + y) / 2.0) + bernoulli_b4(std::abs(x - y) / 2.0)) /
           3.0;
}

}  // namespace

double kernel_eval(const Kernel& kernel, double x, double y) {
    check_domain(x, y);
    if (const auto* sk = std::get_if<SpectralKernel>(&kernel)) {
        double acc = 0.0;
        // The inner product is grouped first so the expression is exactly
        // symmetric in (x, y) despite floating-point non-associativity.
        for (int i = 1; i <= sk->truncation(); ++i)
            acc += sk->eigenvalues[i - 1] *
                   (basis_value(sk->basis, i, x) * basis_value(sk->basis, i, y));
        return acc;
    }
    return bernoulli4_eval(x, y);
}

Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const Grid& grid) {
    const int m = grid.m;
    if (const auto* sk = std::get_if<SpectralKernel>(&kernel)) {
        const int M = sk->truncation();
        Eigen::MatrixXd phi(m, M);
        for (int i = 1; i <= M; ++i)
            for (int j = 0; j < m; ++j)
                phi(j, i - 1) = basis_value(sk->basis, i, grid.points[j]);
        return phi * sk->eigenvalues.asDiagonal() * phi.transpose();
    }
    Eigen::MatrixXd K(m, m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q <= p; ++q) {
            K(p, q) = bernoulli4_eval(grid.points[p], grid.points[q]);
            K(q, p) = K(p, q);
        }
    return K;
}

GridFunction apply_T(const Kernel& kernel, const GridFunction& f) {
    const Grid& grid = f.grid();
    if (const auto* sk = std::get_if<SpectralKernel>(&kernel)) {
        // Tf = sum_i a_i <f, phi_i> phi_i, with quadrature inner products.
        Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.m);
        const Eigen::VectorXd wf = grid.weights.cwiseProduct(f.values());
        for (int i = 1; i <= sk->truncation(); ++i) {
            Eigen::VectorXd phi(grid.m);
            for (int j = 0; j < grid.m; ++j)
                phi[j] = basis_value(sk->basis, i, grid.points[j]);
            out += sk->eigenvalues[i - 1] * phi.dot(wf) * phi;
        }
        return GridFunction(f.grid_ptr(), std::move(out));
    }
    const Eigen::MatrixXd K = kernel_matrix(kernel, grid);
    Eigen::VectorXd out = K * grid.weights.cwiseProduct(f.values());
    return GridFunction(f.grid_ptr(), std::move(out));
}

const SpectralKernel* as_spectral(const Kernel& kernel) {
    return std::get_if<SpectralKernel>(&kernel);
}

}  // namespace findex
