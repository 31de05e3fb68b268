#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "findex/simulate.hpp"

using namespace findex;

TEST_CASE("brownian covariance eigenvalues and trace") {
    const CovarianceModel cov = brownian_covariance(2000);
    CHECK(cov.eigenvalues[0] == doctest::Approx(4.0 / (M_PI * M_PI)));
    CHECK(cov.eigenvalues[1] == doctest::Approx(4.0 / (9.0 * M_PI * M_PI)));
    CHECK(std::abs(cov.trace() - 0.5) < 1e-3);  // trace(C) = int min(x,x) dx
    CHECK(cov.basis == BasisFamily::sine_half_integer());
}

TEST_CASE("power law covariance precondition") {
    CHECK_THROWS_AS(power_law_covariance(1.0, 10, BasisFamily::cosine()),
                    std::invalid_argument);
    const CovarianceModel cov = power_law_covariance(2.0, 3, BasisFamily::cosine());
    CHECK(cov.eigenvalues[2] == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("links") {
    CHECK(apply_link(Link::identity, 1.5) == 1.5);
    CHECK(apply_link(Link::cubic, 2.0) == 8.0);
    CHECK(apply_link(Link::sine, M_PI / 2) == doctest::Approx(1.0));
    CHECK(apply_link(Link::linear_plus_sine, 0.0) == 0.0);
    CHECK(link_from_string("linear_plus_sine") == Link::linear_plus_sine);
    CHECK(to_string(Link::cubic) == "cubic");
    CHECK_THROWS_AS(link_from_string("quadratic"), std::invalid_argument);
}

TEST_CASE("single-mode sampling stays on the span of psi_1") {
    const GridPtr g = make_grid(256);
    CovarianceModel cov{BasisFamily::sine_half_integer(),
                        Eigen::VectorXd::Ones(1), std::nullopt};
    const Eigen::MatrixXd curves = sample_gp(cov, 5, g, 42);
    const GridFunction psi1 = basis_eval(BasisFamily::sine_half_integer(), 1, g);
    for (int i = 0; i < 5; ++i) {
        GridFunction x(g, curves.row(i).transpose());
        const double c = inner_product(x, psi1);
        CHECK(l2_distance(x * (1.0 / c), psi1) < 1e-10);
    }
}

TEST_CASE("sample_gp determinism and second-moment oracle") {
    const GridPtr g = make_grid(128);
    const CovarianceModel cov = brownian_covariance(50);
    const Eigen::MatrixXd a = sample_gp(cov, 50, g, 9001);
    const Eigen::MatrixXd b = sample_gp(cov, 50, g, 9001);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);  // bit-identical

    // E ||X||^2 = trace(C) within 3% at n = 10^4.
    const int n = 10000;
    const Eigen::MatrixXd big = sample_gp(cov, n, g, 7);
    double mean_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        GridFunction x(g, big.row(i).transpose());
        const double nx = l2_norm(x);
        mean_sq += nx * nx;
    }
    mean_sq /= n;
    CHECK(std::abs(mean_sq - cov.trace()) < 0.03 * cov.trace());
}

TEST_CASE("covariance fidelity of basis coefficients") {
    const GridPtr g = make_grid(256);
    const int M = 50, n = 20000;
    const CovarianceModel cov = power_law_covariance(2.0, M, BasisFamily::cosine());
    const Eigen::MatrixXd curves = sample_gp(cov, n, g, 12345);
    const Eigen::MatrixXd psi = basis_matrix(cov.basis, M, *g);
    // Coefficient matrix Z: Z_im = <X_i, psi_m>.
    const Eigen::MatrixXd Z =
        curves * g->weights.asDiagonal() * psi;  // n x M
    const Eigen::MatrixXd emp = (Z.transpose() * Z) / n;
    for (int m = 0; m < 10; ++m) {
        const double bm = cov.eigenvalues[m];
        // Var of each coefficient estimate: b_m^2 * 2/n (chi^2), SE = bm*sqrt(2/n)
        const double se = bm * std::sqrt(2.0 / n);
        CHECK(std::abs(emp(m, m) - bm) < 3.0 * se + 1e-6);
        for (int l = 0; l < m; ++l) {
            const double se_off =
                std::sqrt(cov.eigenvalues[m] * cov.eigenvalues[l] / n);
            CHECK(std::abs(emp(m, l)) < 3.0 * se_off + 1e-6);
        }
    }
}

TEST_CASE("index variable is Gaussian to moment-check accuracy") {
    const GridPtr g = make_grid(256);
    const CovarianceModel cov = power_law_covariance(2.0, 50, BasisFamily::cosine());
    const SpectralKernel kern = power_law_kernel(4.0, 50, BasisFamily::cosine());
    const BetaStar beta =
        make_beta_star_alpha(kern, 0.5, power_law_coeffs(50, 1.0), g);
    const int n = 20000;
    const Eigen::MatrixXd curves = sample_gp(cov, n, g, 31337);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i)
        z[i] = inner_product(GridFunction(g, curves.row(i).transpose()),
                             beta.function);
    const double mean = z.mean();
    const double var = (z.array() - mean).square().mean();
    const double skew =
        ((z.array() - mean) / std::sqrt(var)).cube().mean();
    const double kurt =
        ((z.array() - mean) / std::sqrt(var)).pow(4).mean();
    CHECK(std::abs(skew) < 0.05);
    CHECK(std::abs(kurt - 3.0) < 0.15);
}

TEST_CASE("generate_response examples") {
    const GridPtr g = make_grid(128);
    const GridFunction psi1 = basis_eval(BasisFamily::sine_half_integer(), 1, g);

    // identity link, sigma=0, beta*=0 -> all zero.
    Eigen::MatrixXd curves(3, g->m);
    for (int i = 0; i < 3; ++i) curves.row(i) = psi1.values().transpose() * (i + 1);
    GridFunction zero(g);
    const Eigen::VectorXd y0 =
        generate_response(curves, g, zero, Link::identity, 0.0, 1);
    CHECK(y0.cwiseAbs().maxCoeff() == 0.0);

    // identity link, sigma=0 -> Y_i = <X_i, beta*> exactly.
    const Eigen::VectorXd y1 =
        generate_response(curves, g, psi1, Link::identity, 0.0, 1);
    for (int i = 0; i < 3; ++i) {
        const double ip =
            inner_product(GridFunction(g, curves.row(i).transpose()), psi1);
        CHECK(y1[i] == doctest::Approx(ip).epsilon(1e-12));
    }

    // cubic link, X = 2 psi_1, beta* = psi_1 -> Y = 8 (up to quadrature).
    Eigen::MatrixXd one_curve = psi1.values().transpose() * 2.0;
    const Eigen::VectorXd y2 =
        generate_response(one_curve, g, psi1, Link::cubic, 0.0, 1);
    CHECK(y2[0] == doctest::Approx(8.0).epsilon(1e-3));

    // Noiseless identity-link data is exactly linear: the fourth moment of
    // g(<X,b>) - <X,b> vanishes.
    const Eigen::VectorXd lin =
        generate_response(curves, g, psi1, Link::identity, 0.0, 99);
    double kappa = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double ip =
            inner_product(GridFunction(g, curves.row(i).transpose()), psi1);
        kappa += std::pow(lin[i] - ip, 4.0);
    }
    CHECK(kappa == 0.0);
}

TEST_CASE("make_beta_star_alpha construction identities") {
    const GridPtr g = make_grid(512);
    const int M = 40;
    const SpectralKernel kern = power_law_kernel(4.0, M, BasisFamily::cosine());

    // alpha = 1/2, h = e_1, mu_1 = 1 -> beta* = phi_1.
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(M);
    e1[0] = 1.0;
    const BetaStar b1 = make_beta_star_alpha(kern, 0.5, e1, g);
    CHECK(l2_distance(b1.function, basis_eval(BasisFamily::cosine(), 1, g)) <
          1e-10);

    // ||T^{-1/2} beta*|| = ||h|| = 1 by construction.
    const Eigen::VectorXd h = power_law_coeffs(M, 1.0);
    CHECK(h.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const BetaStar b2 = make_beta_star_alpha(kern, 0.5, h, g);
    double norm_sq = 0.0;
    for (int i = 0; i < M; ++i)
        norm_sq += b2.coeffs[i] * b2.coeffs[i] / kern.eigenvalues[i];
    CHECK(std::sqrt(norm_sq) == doctest::Approx(1.0).epsilon(1e-8));

    // Mis-specified regime witness: for alpha = 1/4 the alpha'=1/2 partial
    // sums grow with M while the alpha'=1/4 norm stays at 1.
    auto range_norm = [&](double alpha, int Mtrunc) {
        const SpectralKernel k = power_law_kernel(4.0, Mtrunc, BasisFamily::cosine());
        const BetaStar b =
            make_beta_star_alpha(k, 0.25, power_law_coeffs(Mtrunc, 0.6), g);
        double s = 0.0;
        for (int i = 0; i < Mtrunc; ++i)
            s += b.coeffs[i] * b.coeffs[i] *
                 std::pow(k.eigenvalues[i], -2.0 * alpha);
        return std::sqrt(s);
    };
    CHECK(range_norm(0.25, 20) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(range_norm(0.25, 80) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(range_norm(0.5, 80) > 1.5 * range_norm(0.5, 20));
}

TEST_CASE("dataset reproducibility") {
    const GridPtr g = make_grid(128);
    const CovarianceModel cov = brownian_covariance(50);
    const SpectralKernel kern = power_law_kernel(4.0, 50, BasisFamily::cosine());
    const BetaStar beta =
        make_beta_star_alpha(kern, 0.5, power_law_coeffs(50, 1.0), g);
    const Dataset a =
        make_dataset(cov, beta.function, Link::identity, 0.5, 25, 777);
    const Dataset b =
        make_dataset(cov, beta.function, Link::identity, 0.5, 25, 777);
    CHECK((a.curves - b.curves).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.responses - b.responses).cwiseAbs().maxCoeff() == 0.0);
    const Dataset c =
        make_dataset(cov, beta.function, Link::identity, 0.5, 25, 778);
    CHECK((a.responses - c.responses).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("derived seed streams are disjoint") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}
