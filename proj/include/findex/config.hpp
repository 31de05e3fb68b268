#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "findex/kernels.hpp"
#include "findex/simulate.hpp"
#include "findex/spectral.hpp"

namespace findex {

// Kernel section of the experiment config:
//   {"type": "power_law"|"bernoulli4", "t": real, "M": int, "basis": string}
struct KernelSpec {
    std::string type = "power_law";
    double t = 4.0;
    int M = 200;
    BasisFamily basis = BasisFamily::cosine();

    Kernel build() const;
    // Spectral view; bernoulli4 maps to its known cosine eigen-expansion.
    SpectralKernel build_spectral(int fallback_M) const;
};

// Covariance section:
//   {"type": "power_law"|"brownian"|"fourier_shifted"|"haar",
//    "c": real, "M": int, "a": real, "b": real}
struct CovarianceSpec {
    std::string type = "power_law";
    double c = 2.0;
    int M = 50;
    double a = 1.0;
    double b = -0.5;
    BasisFamily basis = BasisFamily::cosine();  // for type == "power_law"

    CovarianceModel build() const;
};

// Index parameter: range-space power alpha (commutative construction) or nu
// (Lambda-power construction), with a power-law coefficient rule.
struct BetaSpec {
    std::optional<double> alpha = 0.5;
    std::optional<double> nu;
    double coeff_decay = 1.0;  // h_i ~ i^-coeff_decay, normalized
};

struct LambdaRule {
    std::optional<Theorem> theorem;  // schedule-driven when set
    std::optional<double> fixed;     // fixed lambda otherwise
    double multiplier = 1.0;
};

enum class Metric { estimation, direction, prediction };

Metric metric_from_string(const std::string& name);
std::string to_string(Metric metric);

struct ExperimentConfig {
    KernelSpec kernel;
    CovarianceSpec covariance;
    Link link = Link::identity;
    double sigma = 0.5;
    BetaSpec beta;
    std::vector<int> n_grid = {128, 256, 512, 1024, 2048, 4096};
    int replicates = 50;
    LambdaRule lambda_rule;
    int grid_m = 512;
    std::uint64_t master_seed = 1;
    Metric metric = Metric::estimation;
    std::optional<double> slope_tolerance;  // defaults by metric when unset

    double tolerance() const;
    void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace findex
