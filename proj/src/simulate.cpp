#include "findex/simulate.hpp"

#include <cmath>
#include <numbers>

namespace findex {

namespace {

constexpr double kPi = std::numbers::pi;

// splitmix64; used both for seed derivation and as the sampling stream so
// that reproducibility does not depend on library distribution internals.
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : state_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Box-Muller on 53-bit uniforms; u1 bounded away from 0.
        const double u1 =
            (static_cast<double>(splitmix64(state_) >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0xD1B54A32D192ED03ull * (stream + 1));
    // one mixing round so adjacent streams decorrelate
    (void)splitmix64(s);
    return s;
}

CovarianceModel brownian_covariance(int M) {
    if (M < 1) throw std::invalid_argument("brownian_covariance: M must be >= 1");
    CovarianceModel cov;
    cov.basis = BasisFamily::sine_half_integer();
    cov.eigenvalues.resize(M);
    for (int m = 1; m <= M; ++m) {
        const double f = kPi * (m - 0.5);
        cov.eigenvalues[m - 1] = 1.0 / (f * f);
    }
    cov.decay_exponent = 2.0;
    return cov;
}

CovarianceModel power_law_covariance(double c, int M, const BasisFamily& basis) {
    if (c <= 1.0)
        throw std::invalid_argument(
            "power_law_covariance: c must exceed 1 (trace class), got " +
            std::to_string(c));
    if (M < 1) throw std::invalid_argument("power_law_covariance: M must be >= 1");
    CovarianceModel cov;
    cov.basis = basis;
    cov.eigenvalues.resize(M);
    for (int m = 1; m <= M; ++m) cov.eigenvalues[m - 1] = std::pow(m, -c);
    cov.decay_exponent = c;
    return cov;
}

double apply_link(Link link, double u) {
    switch (link) {
        case Link::identity: return u;
        case Link::cubic: return u * u * u;
        case Link::sine: return std::sin(u);
        case Link::linear_plus_sine: return u + std::sin(u);
    }
    throw std::logic_error("apply_link: unreachable");
}

std::string to_string(Link link) {
    switch (link) {
        case Link::identity: return "identity";
        case Link::cubic: return "cubic";
        case Link::sine: return "sine";
        case Link::linear_plus_sine: return "linear_plus_sine";
    }
    return "?";
}

Link link_from_string(const std::string& name) {
    if (name == "identity") return Link::identity;
    if (name == "cubic") return Link::cubic;
    if (name == "sine") return Link::sine;
    if (name == "linear_plus_sine" || name == "linear-plus-sine")
        return Link::linear_plus_sine;
    throw std::invalid_argument("unknown link: " + name);
}

Eigen::MatrixXd sample_gp(const CovarianceModel& cov, int n, const GridPtr& grid,
                          std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_gp: n must be >= 1");
    const int M = cov.truncation();
    // scaled basis rows: sqrt(b_m) psi_m(x_j)
    Eigen::MatrixXd psi = basis_matrix(cov.basis, M, *grid);  // m x M
    psi = psi * cov.eigenvalues.cwiseSqrt().asDiagonal();
    NormalStream normal(seed);
    Eigen::MatrixXd z(n, M);
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < M; ++m) z(i, m) = normal();
    return z * psi.transpose();  // n x m
}

Eigen::VectorXd generate_response(const Eigen::MatrixXd& curves,
                                  const GridPtr& grid,
                                  const GridFunction& beta_star, Link link,
                                  double sigma, std::uint64_t seed) {
    if (sigma < 0.0)
        throw std::invalid_argument("generate_response: sigma must be >= 0");
    if (beta_star.size() != curves.cols() || !same_grid(*grid, beta_star.grid()))
        throw IncompatibleGrids("generate_response: beta* not on the curve grid");
    const Eigen::VectorXd wb =
        grid->weights.cwiseProduct(beta_star.values());
    Eigen::VectorXd y = curves * wb;
    NormalStream normal(seed);
    for (int i = 0; i < y.size(); ++i)
        y[i] = apply_link(link, y[i]) + sigma * normal();
    return y;
}

Dataset make_dataset(const CovarianceModel& cov, const GridFunction& beta_star,
                     Link link, double sigma, int n, std::uint64_t seed) {
    Dataset ds{beta_star.grid_ptr(), {}, {}, beta_star, {}};
    ds.curves = sample_gp(cov, n, ds.grid, derive_seed(seed, 0));
    ds.responses = generate_response(ds.curves, ds.grid, beta_star, link, sigma,
                                     derive_seed(seed, 1));
    ds.meta.link = link;
    ds.meta.sigma = sigma;
    ds.meta.seed = seed;
    ds.meta.covariance = to_string(cov.basis.kind);
    return ds;
}

Eigen::VectorXd power_law_coeffs(int M, double decay) {
    Eigen::VectorXd h(M);
    for (int i = 1; i <= M; ++i) h[i - 1] = std::pow(i, -decay);
    h /= h.norm();
    return h;
}

BetaStar make_beta_star_alpha(const SpectralKernel& kernel, double alpha,
                              const Eigen::VectorXd& h, const GridPtr& grid) {
    if (!(alpha > 0.0 && alpha <= 0.5))
        throw std::invalid_argument("make_beta_star_alpha: alpha in (0, 1/2]");
    if (h.size() > kernel.truncation())
        throw std::invalid_argument(
            "make_beta_star_alpha: more coefficients than kernel modes");
    const int M = static_cast<int>(h.size());
    BetaStar out{GridFunction(grid), Eigen::VectorXd::Zero(M)};
    Eigen::MatrixXd phi = basis_matrix(kernel.basis, M, *grid);
    for (int i = 0; i < M; ++i)
        out.coeffs[i] = std::pow(kernel.eigenvalues[i], alpha) * h[i];
    out.function = GridFunction(grid, phi * out.coeffs);
    return out;
}

}  // namespace findex
