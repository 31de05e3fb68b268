#include "findex/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace findex {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Quadrature fallback for theta entries without a closed form.
double theta_by_quadrature(const BasisFamily& cov_basis, int m,
                           const BasisFamily& kernel_basis, int i) {
    static const GridPtr dense = make_grid(8193);
    return inner_product(basis_eval(cov_basis, m, dense),
                         basis_eval(kernel_basis, i, dense));
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& A) {
    return 0.5 * (A + A.transpose());
}

// Eigenvalues clamped at zero for tiny negative round-off.
Eigen::VectorXd clamped_eigenvalues(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es) {
    Eigen::VectorXd v = es.eigenvalues();
    for (int i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0 && v[i] > -1e-10) v[i] = 0.0;
    }
    return v;
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& A, double p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(A));
    Eigen::VectorXd v = clamped_eigenvalues(es);
    if (v.minCoeff() < 0.0)
        throw NumericalFailure("matrix_power: eigenvalue below -1e-10");
    Eigen::VectorXd vp(v.size());
    for (int i = 0; i < v.size(); ++i) vp[i] = std::pow(v[i], p);
    return es.eigenvectors() * vp.asDiagonal() * es.eigenvectors().transpose();
}

bool is_diagonal(const Eigen::MatrixXd& A) {
    for (int j = 0; j < A.cols(); ++j)
        for (int i = 0; i < A.rows(); ++i)
            if (i != j && A(i, j) != 0.0) return false;
    return true;
}

}  // namespace

double theta_mi_fourier(double omega, int i) {
    if (omega == std::floor(omega))
        throw std::invalid_argument("theta_mi_fourier: omega must not be integer");
    if (i < 1) throw std::invalid_argument("theta_mi_fourier: i must be >= 1");
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    return omega * std::sin(kPi * omega) * sign /
           (kPi * (omega * omega - static_cast<double>(i) * i));
}

double theta_coefficient(const BasisFamily& cov_basis, int m,
                         const BasisFamily& kernel_basis, int i) {
    if (cov_basis == kernel_basis) return m == i ? 1.0 : 0.0;
    if (kernel_basis.kind != BasisFamily::Kind::cosine)
        return theta_by_quadrature(cov_basis, m, kernel_basis, i);

    switch (cov_basis.kind) {
        case BasisFamily::Kind::cosine:
            return m == i ? 1.0 : 0.0;
        case BasisFamily::Kind::sine_half_integer: {
            // <sqrt2 sin(p x), sqrt2 cos(q x)> with p = (m-1/2)pi, q = i pi;
            // cos(p +- q) vanishes at half-integer multiples of pi.
            const double p = kPi * (m - 0.5);
            const double q = kPi * i;
            return 2.0 * p / (p * p - q * q);
        }
        case BasisFamily::Kind::fourier_shifted: {
            const double omega = cov_basis.a * m + cov_basis.b;
            const double norm =
                std::sqrt(0.5 + std::sin(2.0 * kPi * omega) / (4.0 * kPi * omega));
            return kSqrt2 * theta_mi_fourier(omega, i) / norm;
        }
        case BasisFamily::Kind::haar: {
            const HaarSupport s = haar_support(m);
            const double q = i * kPi;
            return kSqrt2 * s.height *
                   (2.0 * std::sin(q * s.mid) - std::sin(q * s.lo) -
                    std::sin(q * s.hi)) /
                   q;
        }
    }
    return theta_by_quadrature(cov_basis, m, kernel_basis, i);
}

OperatorPair build_operator_pair(const SpectralKernel& kernel,
                                 const CovarianceModel& cov, int M) {
    if (M < 1 || M > kernel.truncation())
        throw std::invalid_argument(
            "build_operator_pair: M must be in [1, kernel truncation]");
    OperatorPair pair;
    pair.dim = M;
    pair.reference_basis = kernel.basis;
    pair.T_mat = kernel.eigenvalues.head(M).asDiagonal();

    if (cov.basis == kernel.basis) {
        if (M > cov.truncation())
            throw std::invalid_argument(
                "build_operator_pair: M exceeds covariance truncation");
        pair.C_mat = Eigen::MatrixXd(cov.eigenvalues.head(M).asDiagonal());
        return pair;
    }
    const int Mc = cov.truncation();
    Eigen::MatrixXd theta(Mc, M);
    for (int m = 1; m <= Mc; ++m)
        for (int i = 1; i <= M; ++i)
            theta(m - 1, i - 1) = theta_coefficient(cov.basis, m, kernel.basis, i);
    pair.C_mat = symmetrized(theta.transpose() *
                             cov.eigenvalues.asDiagonal() * theta);
    return pair;
}

Eigen::MatrixXd lambda_matrix(const OperatorPair& pair) {
    const Eigen::MatrixXd T_half = matrix_power(pair.T_mat, 0.5);
    return symmetrized(T_half * pair.C_mat * T_half);
}

double effective_dimension(const Eigen::MatrixXd& Lambda, double lambda) {
    if (lambda <= 0.0)
        throw std::invalid_argument("effective_dimension: lambda must be > 0");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(Lambda),
                                                      Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (double z : es.eigenvalues()) acc += z / (z + lambda);
    return acc;
}

ThetaDiagnostics theta_diagnostics(const OperatorPair& pair, double alpha,
                                   double lambda) {
    if (lambda <= 0.0)
        throw std::invalid_argument("theta_diagnostics: lambda must be > 0");
    if (!(alpha > 0.0 && alpha <= 0.5))
        throw std::invalid_argument("theta_diagnostics: alpha in (0, 1/2]");
    const int M = pair.dim;
    const Eigen::MatrixXd T_alpha = matrix_power(pair.T_mat, alpha);
    // (TC + lambda I)^-1 T^alpha; Theta = R^T C R is symmetric PSD since
    // (CT + lambda I)^-T = (TC + lambda I)^-1 for symmetric T, C.
    Eigen::MatrixXd TC = pair.T_mat * pair.C_mat;
    TC.diagonal().array() += lambda;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(TC);
    const Eigen::MatrixXd R = lu.solve(T_alpha);
    if (!R.allFinite())
        throw NumericalFailure("theta_diagnostics: singular resolvent");
    const Eigen::MatrixXd Theta = symmetrized(R.transpose() * pair.C_mat * R);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Theta, Eigen::EigenvaluesOnly);
    ThetaDiagnostics out;
    out.norm = es.eigenvalues().maxCoeff();
    out.trace = Theta.trace();
    out.d_lambda = out.trace / out.norm;
    (void)M;
    return out;
}

double bias_lambda(const OperatorPair& pair, const Eigen::VectorXd& beta_coeffs,
                   double lambda) {
    if (lambda <= 0.0)
        throw std::invalid_argument("bias_lambda: lambda must be > 0");
    if (beta_coeffs.size() != pair.dim)
        throw std::invalid_argument("bias_lambda: coefficient length mismatch");
    Eigen::MatrixXd CT = pair.C_mat * pair.T_mat;
    CT.diagonal().array() += lambda;
    const Eigen::VectorXd u = CT.partialPivLu().solve(pair.C_mat * beta_coeffs);
    return (pair.T_mat * u - beta_coeffs).norm();
}

double xi_norm(const OperatorPair& pair, double lambda) {
    if (lambda <= 0.0)
        throw std::invalid_argument("xi_norm: lambda must be > 0");
    Eigen::MatrixXd Lp = lambda_matrix(pair);
    Lp.diagonal().array() += lambda;
    const Eigen::MatrixXd S = Lp.llt().solve(pair.T_mat);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        symmetrized(S.transpose() * S), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Theorem theorem_from_string(const std::string& name) {
    if (name == "T2") return Theorem::T2;
    if (name == "T3") return Theorem::T3;
    if (name == "T4") return Theorem::T4;
    if (name == "T6") return Theorem::T6;
    if (name == "T7") return Theorem::T7;
    throw std::invalid_argument("unknown theorem id: " + name);
}

std::string to_string(Theorem theorem) {
    switch (theorem) {
        case Theorem::T2: return "T2";
        case Theorem::T3: return "T3";
        case Theorem::T4: return "T4";
        case Theorem::T6: return "T6";
        case Theorem::T7: return "T7";
    }
    return "?";
}

namespace {

double require_param(const std::optional<double>& p, const char* name,
                     const char* theorem) {
    if (!p)
        throw std::invalid_argument(std::string("lambda_schedule/rate_exponent: ") +
                                    theorem + " requires parameter " + name);
    return *p;
}

void check_range(bool ok, const std::string& constraint) {
    if (!ok) throw std::invalid_argument("parameter out of range: " + constraint);
}

// Exponent q in lambda = n^-q for each schedule.
double schedule_exponent(Theorem theorem, const RateParams& p) {
    switch (theorem) {
        case Theorem::T2:
        case Theorem::T6: {
            const double t = require_param(p.t, "t", "T2/T6");
            const double c = require_param(p.c, "c", "T2/T6");
            const double alpha = require_param(p.alpha, "alpha", "T2/T6");
            check_range(t > 1.0, "t > 1");
            check_range(c > 1.0, "c > 1");
            check_range(alpha > 0.0 && alpha <= 0.5, "alpha in (0, 1/2]");
            return (t + c) / (1.0 + c + 2.0 * t * (1.0 - alpha));
        }
        case Theorem::T3: {
            const double b = require_param(p.b, "b", "T3");
            const double nu = require_param(p.nu, "nu", "T3");
            check_range(b > 1.0, "b > 1");
            check_range(nu > 0.0 && nu <= 1.0, "nu in (0, 1]");
            return b / (1.0 + b + 2.0 * b * nu);
        }
        case Theorem::T4: {
            const double b = require_param(p.b, "b", "T4");
            const double t = require_param(p.t, "t", "T4");
            const double nu = require_param(p.nu, "nu", "T4");
            check_range(b > 1.0, "b > 1");
            check_range(t > 1.0, "t > 1");
            check_range(nu > 0.0 && nu <= 0.5 - t / (2.0 * b),
                        "nu in (0, 1/2 - t/(2b)]");
            return b / (t + b + 2.0 * b * nu);
        }
        case Theorem::T7: {
            const double b = require_param(p.b, "b", "T7");
            check_range(b > 1.0, "b > 1");
            return b / (1.0 + b);
        }
    }
    throw std::logic_error("schedule_exponent: unreachable");
}

}  // namespace

double lambda_schedule(Theorem theorem, const RateParams& params, double n) {
    if (n <= 1.0) throw std::invalid_argument("lambda_schedule: n must exceed 1");
    return std::pow(n, -schedule_exponent(theorem, params));
}

double rate_exponent(Theorem theorem, const RateParams& p) {
    (void)schedule_exponent(theorem, p);  // validates parameter ranges
    switch (theorem) {
        case Theorem::T2:
            return *p.alpha * *p.t / (1.0 + *p.c + 2.0 * *p.t * (1.0 - *p.alpha));
        case Theorem::T3:
            return *p.b * *p.nu / (1.0 + *p.b + 2.0 * *p.b * *p.nu);
        case Theorem::T4:
            return (*p.b * *p.nu + (*p.t - 1.0) / 2.0) /
                   (*p.t + *p.b + 2.0 * *p.b * *p.nu);
        case Theorem::T6:
            return (2.0 * *p.alpha * *p.t + *p.c) /
                   (1.0 + *p.c + 2.0 * *p.t * (1.0 - *p.alpha));
        case Theorem::T7:
            return *p.b / (1.0 + *p.b);
    }
    throw std::logic_error("rate_exponent: unreachable");
}

AlignmentQuantities alignment_quantities(const SpectralKernel& kernel,
                                         const CovarianceModel& cov, int M) {
    const OperatorPair pair = build_operator_pair(kernel, cov, M);
    AlignmentQuantities out;
    out.eta = pair.C_mat;
    out.tau.resize(M);
    for (int j = 0; j < M; ++j) {
        double acc = 0.0;
        for (int i = 0; i < M; ++i)
            acc += pair.T_mat(i, i) * out.eta(i, j) * out.eta(i, j);
        out.tau[j] = acc;
    }

    const Eigen::MatrixXd Lambda = lambda_matrix(pair);
    const Eigen::VectorXd mu = pair.T_mat.diagonal();
    if (is_diagonal(Lambda)) {
        // Commutative configuration: Lambda's eigenfunctions are coordinate
        // vectors, the cross terms vanish, and the supremum is exactly 1.
        out.sup_check = 1.0;
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lambda);
    // Columns ordered by decreasing eigenvalue to match the index pairing.
    Eigen::MatrixXd V = es.eigenvectors().rowwise().reverse();
    const Eigen::MatrixXd B = V.transpose() * pair.T_mat * V;
    double sup = 0.0;
    for (int i = 0; i < M; ++i)
        for (int l = 0; l < M; ++l) {
            if (mu[i] <= 0.0 || mu[l] <= 0.0) continue;
            sup = std::max(sup, B(i, l) * B(i, l) / (mu[i] * mu[l]));
        }
    out.sup_check = sup;
    return out;
}

DiagnosticsReport diagnostics_report(const OperatorPair& pair, double alpha,
                                     const Eigen::VectorXd& beta_coeffs,
                                     double lambda) {
    DiagnosticsReport rep;
    rep.lambda = lambda;
    const Eigen::MatrixXd Lambda = lambda_matrix(pair);
    rep.N_lambda = effective_dimension(Lambda, lambda);
    const ThetaDiagnostics th = theta_diagnostics(pair, alpha, lambda);
    rep.theta_norm = th.norm;
    rep.theta_trace = th.trace;
    rep.d_lambda = th.d_lambda;
    rep.xi_norm = xi_norm(pair, lambda);
    rep.bias = bias_lambda(pair, beta_coeffs, lambda);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lambda, Eigen::EigenvaluesOnly);
    Eigen::VectorXd zeta = es.eigenvalues().reverse();
    const int lo = 1, hi = std::min<int>(20, static_cast<int>(zeta.size()));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = lo; i < hi; ++i) {
        if (zeta[i] <= 0.0) break;
        const double x = std::log(static_cast<double>(i + 1));
        const double y = std::log(zeta[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    rep.zeta_slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
    return rep;
}

BetaStar make_beta_star_nu(const OperatorPair& pair, double nu,
                           const Eigen::VectorXd& h, const GridPtr& grid) {
    if (pair.dim == 0)
        throw DependencyMissing("make_beta_star_nu: operator pair not built");
    if (h.size() != pair.dim)
        throw std::invalid_argument("make_beta_star_nu: coefficient length mismatch");
    const Eigen::MatrixXd Lambda_nu = matrix_power(lambda_matrix(pair), nu);
    const Eigen::MatrixXd T_half = matrix_power(pair.T_mat, 0.5);
    BetaStar out{GridFunction(grid), T_half * (Lambda_nu * h)};
    const Eigen::MatrixXd phi = basis_matrix(pair.reference_basis, pair.dim, *grid);
    out.function = GridFunction(grid, phi * out.coeffs);
    return out;
}

}  // namespace findex
