#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "findex/basis.hpp"
#include "findex/grid.hpp"
#include "findex/kernels.hpp"

namespace findex {

// Covariance operator C = sum_m b_m psi_m (x) psi_m, truncated at M terms.
struct CovarianceModel {
    BasisFamily basis;
    Eigen::VectorXd eigenvalues;  // b_1 >= b_2 >= ... > 0
    std::optional<double> decay_exponent;  // c with b_m ~ m^-c, when known

    int truncation() const { return static_cast<int>(eigenvalues.size()); }
    double trace() const { return eigenvalues.sum(); }
};

// b_m = 1 / (pi^2 (m - 1/2)^2), psi_m = sqrt(2) sin(pi (m - 1/2) x).
CovarianceModel brownian_covariance(int M);

// b_m = m^-c. Requires c > 1 (trace class).
CovarianceModel power_law_covariance(double c, int M, const BasisFamily& basis);

enum class Link { identity, cubic, sine, linear_plus_sine };

double apply_link(Link link, double u);
std::string to_string(Link link);
Link link_from_string(const std::string& name);

struct DatasetMeta {
    Link link = Link::identity;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string covariance;
};

// n covariate curves (rows) on a shared grid plus scalar responses.
struct Dataset {
    GridPtr grid;
    Eigen::MatrixXd curves;     // n x m
    Eigen::VectorXd responses;  // n
    GridFunction beta_star;     // true index used for generation
    DatasetMeta meta;

    int n() const { return static_cast<int>(curves.rows()); }
    GridFunction curve(int i) const {
        return GridFunction(grid, curves.row(i).transpose());
    }
};

// Karhunen-Loeve sampling: row i is sum_m sqrt(b_m) z_im psi_m on the grid,
// z_im iid standard normal. Deterministic given (cov, n, grid, seed).
Eigen::MatrixXd sample_gp(const CovarianceModel& cov, int n, const GridPtr& grid,
                          std::uint64_t seed);

// Y_i = g(<X_i, beta*>) + sigma * eps_i, eps iid standard normal.
Eigen::VectorXd generate_response(const Eigen::MatrixXd& curves,
                                  const GridPtr& grid,
                                  const GridFunction& beta_star, Link link,
                                  double sigma, std::uint64_t seed);

Dataset make_dataset(const CovarianceModel& cov, const GridFunction& beta_star,
                     Link link, double sigma, int n, std::uint64_t seed);

// beta* = sum_i mu_i^alpha h_i phi_i in the kernel eigenbasis, with h the
// supplied unit coefficient sequence, so ||T^-alpha beta*|| = ||h|| = 1.
struct BetaStar {
    GridFunction function;
    Eigen::VectorXd coeffs;  // coefficients in the kernel eigenbasis
};

BetaStar make_beta_star_alpha(const SpectralKernel& kernel, double alpha,
                              const Eigen::VectorXd& h, const GridPtr& grid);

// Coefficient rule h_i proportional to i^-decay, normalized to unit norm.
Eigen::VectorXd power_law_coeffs(int M, double decay);

// Per-replicate stream derivation: one master seed, disjoint child streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace findex
