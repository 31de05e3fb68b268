#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "findex/estimator.hpp"

using namespace findex;

namespace {

Dataset synthetic_dataset(int n, int m, const CovarianceModel& cov,
                          const GridFunction& beta, Link link, double sigma,
                          std::uint64_t seed) {
    return make_dataset(cov, beta, link, sigma, n, seed);
}

// Independent ridge oracle in the truncated kernel eigenbasis: minimize
// (1/n) sum_i (y_i - sum_l c_l <X_i,phi_l>)^2 + lambda sum_l c_l^2 / a_l.
GridFunction ridge_oracle(const Dataset& ds, const SpectralKernel& kernel,
                          double lambda) {
    const int M = kernel.truncation();
    const Eigen::MatrixXd phi = basis_matrix(kernel.basis, M, *ds.grid);
    const Eigen::MatrixXd G =
        ds.curves * ds.grid->weights.asDiagonal() * phi;  // n x M
    const double n = static_cast<double>(ds.n());
    Eigen::MatrixXd A = G.transpose() * G / n;
    for (int l = 0; l < M; ++l) A(l, l) += lambda / kernel.eigenvalues[l];
    const Eigen::VectorXd c = A.ldlt().solve(G.transpose() * ds.responses / n);
    return GridFunction(ds.grid, phi * c);
}

}  // namespace

TEST_CASE("gram matrix examples") {
    const GridPtr g = make_grid(512);
    const GridFunction phi1 = basis_eval(BasisFamily::cosine(), 1, g);
    const Kernel k = power_law_kernel(4.0, 20, BasisFamily::cosine());

    Eigen::MatrixXd curves(2, g->m);
    curves.row(0) = phi1.values().transpose();
    curves.row(1) = phi1.values().transpose();
    const Eigen::MatrixXd K = gram_matrix(curves, k, *g);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(K(i, j) == doctest::Approx(1.0).epsilon(1e-6));  // a_1 = 1

    Eigen::MatrixXd zero_curve = Eigen::MatrixXd::Zero(1, g->m);
    const Eigen::MatrixXd K0 = gram_matrix(zero_curve, k, *g);
    CHECK(K0(0, 0) == 0.0);
}

TEST_CASE("gram matrix agrees with the spectral-coefficient oracle") {
    const GridPtr g = make_grid(512);
    const int M = 15, n = 8;
    const SpectralKernel kern = power_law_kernel(3.0, M, BasisFamily::cosine());
    const CovarianceModel cov = power_law_covariance(2.0, 30, BasisFamily::cosine());
    const Eigen::MatrixXd curves = sample_gp(cov, n, g, 22);
    const Eigen::MatrixXd K = gram_matrix(curves, Kernel{kern}, *g);

    // Oracle K_ij = sum_l a_l <X_i,phi_l><X_j,phi_l>.
    const Eigen::MatrixXd phi = basis_matrix(kern.basis, M, *g);
    const Eigen::MatrixXd G = curves * g->weights.asDiagonal() * phi;
    const Eigen::MatrixXd Kref =
        G * kern.eigenvalues.asDiagonal() * G.transpose();
    CHECK((K - Kref).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fit scalar case and trivial responses") {
    const GridPtr g = make_grid(256);
    const Kernel k = power_law_kernel(4.0, 20, BasisFamily::cosine());
    const GridFunction phi1 = basis_eval(BasisFamily::cosine(), 1, g);

    Eigen::MatrixXd curves(1, g->m);
    curves.row(0) = phi1.values().transpose();
    Eigen::VectorXd y(1);
    y[0] = 2.0;
    Dataset ds{g, curves, y, GridFunction(g), DatasetMeta{}};

    const double lambda = 0.5;
    const FitResult f = fit(ds, k, lambda);
    const double K11 = gram_matrix(curves, k, *g)(0, 0);
    CHECK(f.alpha[0] == doctest::Approx(y[0] / (K11 + 1.0 * lambda)).epsilon(1e-10));

    Dataset ds0{g, curves, Eigen::VectorXd::Zero(1), GridFunction(g), DatasetMeta{}};
    const FitResult f0 = fit(ds0, k, lambda);
    CHECK(f0.alpha.cwiseAbs().maxCoeff() == 0.0);
    CHECK(l2_norm(f0.beta_hat) == 0.0);

    CHECK_THROWS_AS(fit(ds, k, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fit(ds, k, -1.0), std::invalid_argument);
}

TEST_CASE("regularization shrinks the estimate monotonically") {
    const GridPtr g = make_grid(256);
    const CovarianceModel cov = brownian_covariance(40);
    const SpectralKernel kern = power_law_kernel(4.0, 40, BasisFamily::cosine());
    const BetaStar beta =
        make_beta_star_alpha(kern, 0.5, power_law_coeffs(40, 1.0), g);
    const Dataset ds =
        synthetic_dataset(40, 256, cov, beta.function, Link::identity, 0.3, 5);

    double prev_norm = std::numeric_limits<double>::infinity();
    double prev_rkhs = std::numeric_limits<double>::infinity();
    for (const double lam : {1.0, 10.0, 100.0}) {
        const FitResult f = fit(ds, Kernel{kern}, lam);
        CHECK(l2_norm(f.beta_hat) < prev_norm);
        prev_norm = l2_norm(f.beta_hat);
        const Eigen::MatrixXd K = gram_matrix(ds.curves, Kernel{kern}, *g);
        const double rkhs = f.alpha.dot(K * f.alpha);
        CHECK(rkhs <= prev_rkhs + 1e-12);
        prev_rkhs = rkhs;
        CHECK(f.solve_residual <= 1e-8);
    }
}

TEST_CASE("representer fit equals the truncated-basis ridge oracle") {
    const GridPtr g = make_grid(256);
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 20 + 30 * trial;
        const int M = 10 + 8 * trial;
        const SpectralKernel kern = power_law_kernel(4.0, M, BasisFamily::cosine());
        const CovarianceModel cov =
            power_law_covariance(2.0, M, BasisFamily::cosine());
        const BetaStar beta =
            make_beta_star_alpha(kern, 0.5, power_law_coeffs(M, 1.0), g);
        const Dataset ds = synthetic_dataset(n, 256, cov, beta.function,
                                             Link::identity, 0.5, 100 + trial);
        const double lambda = 1e-3;
        const FitResult f = fit(ds, Kernel{kern}, lambda);
        const GridFunction oracle = ridge_oracle(ds, kern, lambda);
        const double rel =
            l2_distance(f.beta_hat, oracle) / std::max(1e-12, l2_norm(oracle));
        CHECK(rel < 1e-6);
    }
}

TEST_CASE("permutation equivariance of the fit") {
    const GridPtr g = make_grid(128);
    const CovarianceModel cov = brownian_covariance(30);
    const SpectralKernel kern = power_law_kernel(4.0, 30, BasisFamily::cosine());
    const BetaStar beta =
        make_beta_star_alpha(kern, 0.5, power_law_coeffs(30, 1.0), g);
    const Dataset ds =
        synthetic_dataset(25, 128, cov, beta.function, Link::identity, 0.4, 55);

    std::vector<int> perm(ds.n());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(1);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd pc(ds.n(), g->m);
    Eigen::VectorXd py(ds.n());
    for (int i = 0; i < ds.n(); ++i) {
        pc.row(i) = ds.curves.row(perm[i]);
        py[i] = ds.responses[perm[i]];
    }
    Dataset pds{g, pc, py, GridFunction(g), DatasetMeta{}};
    const FitResult fa = fit(ds, Kernel{kern}, 1e-2);
    const FitResult fb = fit(pds, Kernel{kern}, 1e-2);
    CHECK(l2_distance(fa.beta_hat, fb.beta_hat) < 1e-10);
}

TEST_CASE("predict: pins and kernel-trick identity") {
    const GridPtr g = make_grid(256);
    const GridFunction phi1 = basis_eval(BasisFamily::cosine(), 1, g);
    const CovarianceModel cov = brownian_covariance(30);
    const SpectralKernel kern = power_law_kernel(4.0, 30, BasisFamily::cosine());
    const BetaStar beta =
        make_beta_star_alpha(kern, 0.5, power_law_coeffs(30, 1.0), g);
    const Dataset ds =
        synthetic_dataset(20, 256, cov, beta.function, Link::identity, 0.3, 8);
    const FitResult f = fit(ds, Kernel{kern}, 1e-2);

    FitResult zero_fit = f;
    zero_fit.beta_hat = GridFunction(g);
    CHECK(predict(zero_fit, phi1) == 0.0);
    CHECK(predict(f, GridFunction(g)) == 0.0);
    FitResult three = f;
    three.beta_hat = phi1 * 3.0;
    CHECK(predict(three, phi1) == doctest::Approx(3.0).epsilon(1e-6));

    // predict(fit, X_i) = (K alpha)_i on training curves.
    const Eigen::MatrixXd K = gram_matrix(ds.curves, Kernel{kern}, *g);
    const Eigen::VectorXd Ka = K * f.alpha;
    for (int i = 0; i < ds.n(); ++i)
        CHECK(std::abs(predict(f, ds.curve(i)) - Ka[i]) < 1e-8);
}

TEST_CASE("error metrics") {
    const GridPtr g = make_grid(512);
    const GridFunction phi1 = basis_eval(BasisFamily::cosine(), 1, g);
    const GridFunction phi2 = basis_eval(BasisFamily::cosine(), 2, g);

    CHECK(estimation_error(phi1, phi1) == 0.0);
    CHECK(estimation_error(GridFunction(g), phi1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(estimation_error(phi1 + phi2 * 0.1, phi1) ==
          doctest::Approx(0.1).epsilon(1e-6));

    CHECK(direction_error(phi1 * 2.0, phi1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(direction_error(phi1 * -1.0, phi1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(direction_error(phi1, phi2) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK_THROWS_AS(direction_error(GridFunction(g), phi1), DegenerateInput);

    const CovarianceModel cov = brownian_covariance(20);
    const GridFunction psi1 = basis_eval(cov.basis, 1, g);
    CHECK(prediction_error(phi1, phi1, cov) == 0.0);
    CHECK(prediction_error(psi1 + phi1, phi1, cov) ==
          doctest::Approx(2.0 / M_PI).epsilon(1e-4));
    // Difference orthogonal to span(psi_1..psi_M): truncation blind spot.
    const GridFunction psi25 = basis_eval(cov.basis, 25, g);
    CHECK(prediction_error(phi1 + psi25, phi1, cov) < 1e-4);
}

TEST_CASE("stein check: identity and degenerate cases") {
    const GridPtr g = make_grid(128);
    const CovarianceModel cov = brownian_covariance(40);
    const SpectralKernel kern = power_law_kernel(4.0, 40, BasisFamily::cosine());
    const BetaStar beta =
        make_beta_star_alpha(kern, 0.5, power_law_coeffs(40, 1.0), g);

    const Dataset ds = synthetic_dataset(100000, 128, cov, beta.function,
                                         Link::identity, 0.0, 321);
    const SteinCheck sc = stein_check(ds, beta.function, cov);
    CHECK(sc.cosine_similarity > 0.99);
    CHECK(sc.ratio_estimate == doctest::Approx(1.0).epsilon(0.05));

    CHECK_THROWS_AS(stein_check(ds, GridFunction(g), cov), DegenerateInput);
    Dataset tiny{g, ds.curves.topRows(1), ds.responses.head(1), GridFunction(g),
                 DatasetMeta{}};
    CHECK_THROWS_AS(stein_check(tiny, beta.function, cov), std::invalid_argument);
}

TEST_CASE("stein check: cubic link matches its Stein-calculus constant") {
    const GridPtr g = make_grid(128);
    const CovarianceModel cov = brownian_covariance(40);
    const SpectralKernel kern = power_law_kernel(4.0, 40, BasisFamily::cosine());
    const BetaStar beta =
        make_beta_star_alpha(kern, 0.5, power_law_coeffs(40, 1.0), g);
    const int n = 100000;
    const Dataset ds =
        synthetic_dataset(n, 128, cov, beta.function, Link::cubic, 0.0, 99);

    // Oracle: theta = E[g'(Z)] = 3 E[Z^2] for Z = <X, beta*> ~ N(0, var).
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = inner_product(ds.curve(i), beta.function);
        var += z * z;
    }
    var /= n;
    const SteinCheck sc = stein_check(ds, beta.function, cov);
    CHECK(std::abs(sc.ratio_estimate - 3.0 * var) < 0.1 * 3.0 * var);
    CHECK(sc.cosine_similarity > 0.99);
}

TEST_CASE("low-rank and dense fit routes agree") {
    const GridPtr g = make_grid(256);
    const CovarianceModel cov = brownian_covariance(30);
    // M < n triggers the low-rank route for spectral kernels; bernoulli4 with
    // matched eigenvalues takes the dense route. Compare against the oracle.
    const SpectralKernel kern = power_law_kernel(4.0, 12, BasisFamily::cosine());
    const BetaStar beta =
        make_beta_star_alpha(kern, 0.5, power_law_coeffs(12, 1.0), g);
    const Dataset ds =
        synthetic_dataset(60, 256, cov, beta.function, Link::identity, 0.4, 17);
    const FitResult f = fit(ds, Kernel{kern}, 1e-3);
    const GridFunction oracle = ridge_oracle(ds, kern, 1e-3);
    CHECK(l2_distance(f.beta_hat, oracle) / l2_norm(oracle) < 1e-6);
}
