#pragma once

#include <optional>

#include "findex/kernels.hpp"
#include "findex/simulate.hpp"

namespace findex {

// Matrix representations of the RKHS integral operator T and the covariance
// operator C on a shared M-dimensional reference basis (the kernel basis).
struct OperatorPair {
    int dim = 0;
    Eigen::MatrixXd T_mat;  // diag(a_1..a_M)
    Eigen::MatrixXd C_mat;  // [C]_ij = sum_m b_m theta_mi theta_mj
    BasisFamily reference_basis;
};

// Cross-basis inner products theta_mi = <psi_m, phi_i> against the
// orthonormal cosine family; closed forms where available, dense-grid
// quadrature otherwise.
double theta_coefficient(const BasisFamily& cov_basis, int m,
                         const BasisFamily& kernel_basis, int i);

// Closed form for <cos(omega pi .), cos(i pi .)> in the paper's unnormalized
// cosine convention: omega sin(pi omega) (-1)^i / (pi (omega^2 - i^2)).
double theta_mi_fourier(double omega, int i);

OperatorPair build_operator_pair(const SpectralKernel& kernel,
                                 const CovarianceModel& cov, int M);

// Lambda = T^{1/2} C T^{1/2}, symmetrized.
Eigen::MatrixXd lambda_matrix(const OperatorPair& pair);

// Effective dimension N(lambda) = sum_i zeta_i / (zeta_i + lambda) over the
// eigenvalues of Lambda.
double effective_dimension(const Eigen::MatrixXd& Lambda, double lambda);

struct ThetaDiagnostics {
    double norm = 0.0;   // operator norm of Theta
    double trace = 0.0;
    double d_lambda = 0.0;  // trace / norm
};

// Theta = T^alpha (CT + lambda I)^-1 C (TC + lambda I)^-1 T^alpha.
ThetaDiagnostics theta_diagnostics(const OperatorPair& pair, double alpha,
                                   double lambda);

// BIAS(lambda) = || T (CT + lambda I)^-1 C beta* - beta* || with beta* given
// by its coefficients in the reference basis.
double bias_lambda(const OperatorPair& pair, const Eigen::VectorXd& beta_coeffs,
                   double lambda);

// || Xi || with Xi = T (Lambda + lambda I)^-2 T.
double xi_norm(const OperatorPair& pair, double lambda);

enum class Theorem { T2, T3, T4, T6, T7 };

Theorem theorem_from_string(const std::string& name);
std::string to_string(Theorem theorem);

struct RateParams {
    std::optional<double> t, c, b, alpha, nu;
};

// Regularization schedules lambda = n^-q and the positive decay exponents of
// the matching rate claims. T6/T7 exponents apply to the squared prediction
// proxy ||C^{1/2}(beta_hat - beta*)||^2.
double lambda_schedule(Theorem theorem, const RateParams& params, double n);
double rate_exponent(Theorem theorem, const RateParams& params);

struct AlignmentQuantities {
    Eigen::MatrixXd eta;   // eta_ij = sum_m b_m theta_mi theta_mj
    Eigen::VectorXd tau;   // tau_j = sum_i a_i eta_ij^2
    double sup_check = 0;  // truncated proxy of the eigenfunction-alignment sup
};

AlignmentQuantities alignment_quantities(const SpectralKernel& kernel,
                                         const CovarianceModel& cov, int M);

struct DiagnosticsReport {
    double lambda = 0;
    double N_lambda = 0;
    double d_lambda = 0;
    double theta_norm = 0;
    double theta_trace = 0;
    double xi_norm = 0;
    double bias = 0;
    double zeta_slope = 0;  // fitted log-log decay of Lambda's eigenvalues
};

DiagnosticsReport diagnostics_report(const OperatorPair& pair, double alpha,
                                     const Eigen::VectorXd& beta_coeffs,
                                     double lambda);

// beta* = T^{1/2} Lambda^nu h expressed in the reference basis.
BetaStar make_beta_star_nu(const OperatorPair& pair, double nu,
                           const Eigen::VectorXd& h, const GridPtr& grid);

}  // namespace findex
