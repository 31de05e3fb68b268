#include "findex/estimator.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace findex {

namespace {

// Deterministic power-iteration estimate of the top eigenvalue of a PSD
// matrix given through its action.
template <typename Apply>
double top_eigenvalue_estimate(int n, Apply&& apply) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
    double value = 0.0;
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXd w = apply(v);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        value = v.dot(w);
        v = w / norm;
    }
    return value;
}

}  // namespace

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& curves, const Kernel& kernel,
                            const Grid& grid) {
    if (curves.rows() < 1)
        throw std::invalid_argument("gram_matrix: need at least one curve");
    if (curves.cols() != grid.m)
        throw IncompatibleGrids("gram_matrix: curves not on the given grid");
    if (const SpectralKernel* sk = as_spectral(kernel)) {
        // K = G A G^T with G_il = <X_i, phi_l> (quadrature).
        Eigen::MatrixXd phi = basis_matrix(sk->basis, sk->truncation(), grid);
        Eigen::MatrixXd G =
            curves * grid.weights.asDiagonal() * phi;  // n x M
        Eigen::MatrixXd K = G * sk->eigenvalues.asDiagonal() * G.transpose();
        return 0.5 * (K + K.transpose());
    }
    const Eigen::MatrixXd Kmat = kernel_matrix(kernel, grid);
    const Eigen::MatrixXd B =
        grid.weights.asDiagonal() * Kmat * grid.weights.asDiagonal();
    Eigen::MatrixXd K = curves * B * curves.transpose();
    return 0.5 * (K + K.transpose());
}

FitResult fit(const Dataset& dataset, const Kernel& kernel, double lambda) {
    if (lambda <= 0.0)
        throw std::invalid_argument("fit: lambda must be > 0");
    const int n = dataset.n();
    if (n < 1) throw std::invalid_argument("fit: empty dataset");
    const Grid& grid = *dataset.grid;
    const Eigen::VectorXd& y = dataset.responses;
    const double ridge = n * lambda;

    Eigen::VectorXd alpha;
    Eigen::VectorXd beta_values;
    double gram_cond = 0.0;
    Eigen::VectorXd K_alpha;  // K * alpha, for the residual check

    const SpectralKernel* sk = as_spectral(kernel);
    if (sk && sk->truncation() < n) {
        // Low-rank route: K = G A G^T, so by Woodbury
        //   alpha = (1/ridge) [ y - G (ridge A^-1 + G^T G)^-1 G^T y ].
        const int M = sk->truncation();
        const Eigen::MatrixXd phi = basis_matrix(sk->basis, M, grid);
        const Eigen::MatrixXd G = dataset.curves * grid.weights.asDiagonal() * phi;
        Eigen::MatrixXd inner = G.transpose() * G;
        inner.diagonal() += ridge * sk->eigenvalues.cwiseInverse();
        Eigen::LLT<Eigen::MatrixXd> llt(inner);
        if (llt.info() != Eigen::Success)
            throw NumericalFailure("fit: inner Cholesky factorization failed");
        alpha = (y - G * llt.solve(G.transpose() * y)) / ridge;
        const Eigen::VectorXd c = sk->eigenvalues.asDiagonal() * (G.transpose() * alpha);
        K_alpha = G * c;
        beta_values = phi * c;
        const double top = top_eigenvalue_estimate(
            M, [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
                return sk->eigenvalues.cwiseSqrt().asDiagonal() *
                       (G.transpose() *
                        (G * (sk->eigenvalues.cwiseSqrt().asDiagonal() * v)));
            });
        gram_cond = (top + ridge) / ridge;  // K is rank-deficient for M < n
    } else {
        const Eigen::MatrixXd K = gram_matrix(dataset.curves, kernel, grid);
        Eigen::MatrixXd A = K;
        A.diagonal().array() += ridge;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() == Eigen::Success) {
            alpha = llt.solve(y);
        } else {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
            if (ldlt.info() == Eigen::Success) {
                alpha = ldlt.solve(y);
            } else {
                alpha = A.colPivHouseholderQr().solve(y);
            }
        }
        if (!alpha.allFinite())
            throw NumericalFailure("fit: linear solve produced non-finite values");
        K_alpha = K * alpha;
        const double top = top_eigenvalue_estimate(
            n, [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return K * v; });
        gram_cond = (top + ridge) / ridge;
        const Eigen::MatrixXd Kmat = kernel_matrix(kernel, grid);
        beta_values =
            Kmat * (grid.weights.cwiseProduct(dataset.curves.transpose() * alpha));
    }

    FitResult result{std::move(alpha), lambda,
                     GridFunction(dataset.grid, std::move(beta_values)), gram_cond,
                     0.0};
    const double y_norm = y.norm();
    const double residual = (K_alpha + ridge * result.alpha - y).norm();
    result.solve_residual = y_norm > 0.0 ? residual / y_norm : residual;
    if (!std::isfinite(result.solve_residual) || result.solve_residual > 1e-8)
        throw NumericalFailure("fit: solve residual " +
                               std::to_string(result.solve_residual) +
                               " exceeds 1e-8 of ||y||");
    return result;
}

double predict(const FitResult& fit, const GridFunction& x_new) {
    return inner_product(x_new, fit.beta_hat);
}

double estimation_error(const GridFunction& beta_hat,
                        const GridFunction& beta_ref) {
    return l2_distance(beta_hat, beta_ref);
}

double direction_error(const GridFunction& beta_hat,
                       const GridFunction& beta_ref) {
    const double nh = l2_norm(beta_hat);
    const double nr = l2_norm(beta_ref);
    if (nh == 0.0 || nr == 0.0)
        throw DegenerateInput("direction_error: zero-norm input");
    const GridFunction u = beta_hat * (1.0 / nh);
    const GridFunction v = beta_ref * (1.0 / nr);
    return std::min(l2_distance(u, v), l2_distance(u, v * -1.0));
}

double prediction_error(const GridFunction& beta_hat,
                        const GridFunction& beta_ref,
                        const CovarianceModel& cov) {
    const GridFunction diff = beta_hat - beta_ref;
    double acc = 0.0;
    for (int m = 1; m <= cov.truncation(); ++m) {
        const double d =
            inner_product(diff, basis_eval(cov.basis, m, diff.grid_ptr()));
        acc += cov.eigenvalues[m - 1] * d * d;
    }
    return std::sqrt(acc);
}

GridFunction apply_covariance(const CovarianceModel& cov, const GridFunction& f) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
    for (int m = 1; m <= cov.truncation(); ++m) {
        const GridFunction psi = basis_eval(cov.basis, m, f.grid_ptr());
        out += cov.eigenvalues[m - 1] * inner_product(f, psi) * psi.values();
    }
    return GridFunction(f.grid_ptr(), std::move(out));
}

SteinCheck stein_check(const Dataset& dataset, const GridFunction& beta_ref,
                       const CovarianceModel& cov) {
    if (dataset.n() < 2)
        throw std::invalid_argument("stein_check: need n >= 2");
    require_same_grid(dataset.curve(0), beta_ref, "stein_check");
    const GridFunction c_beta = apply_covariance(cov, beta_ref);
    const double c_beta_sq = inner_product(c_beta, c_beta);
    if (c_beta_sq <= 0.0)
        throw DegenerateInput("stein_check: C beta_ref vanishes");
    const Eigen::VectorXd r_hat_values =
        dataset.curves.transpose() * dataset.responses / dataset.n();
    const GridFunction r_hat(dataset.grid, r_hat_values);
    const double ip = inner_product(r_hat, c_beta);
    const double r_norm = l2_norm(r_hat);
    SteinCheck out;
    out.cosine_similarity =
        r_norm > 0.0 ? ip / (r_norm * std::sqrt(c_beta_sq)) : 0.0;
    out.ratio_estimate = ip / c_beta_sq;
    return out;
}

}  // namespace findex
