#include "findex/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace findex {

namespace {
using nlohmann::json;
constexpr double kPi = std::numbers::pi;
}  // namespace

Kernel KernelSpec::build() const {
    if (type == "bernoulli4") return Bernoulli4Kernel{};
    if (type == "power_law") return power_law_kernel(t, M, basis);
    throw std::invalid_argument("kernel spec: unknown type " + type);
}

SpectralKernel KernelSpec::build_spectral(int fallback_M) const {
    if (type == "power_law") return power_law_kernel(t, M, basis);
    if (type == "bernoulli4") {
        // a_i = (i pi)^-4 in the orthonormal cosine convention.
        SpectralKernel k;
        k.basis = BasisFamily::cosine();
        k.eigenvalues.resize(fallback_M);
        for (int i = 1; i <= fallback_M; ++i)
            k.eigenvalues[i - 1] = std::pow(i * kPi, -4.0);
        k.decay_exponent = 4.0;
        return k;
    }
    throw std::invalid_argument("kernel spec: unknown type " + type);
}

CovarianceModel CovarianceSpec::build() const {
    if (type == "brownian") return brownian_covariance(M);
    if (type == "power_law") return power_law_covariance(c, M, basis);
    if (type == "fourier_shifted")
        return power_law_covariance(c, M, BasisFamily::fourier_shifted(a, b));
    if (type == "haar") return power_law_covariance(c, M, BasisFamily::haar());
    throw std::invalid_argument("covariance spec: unknown type " + type);
}

Metric metric_from_string(const std::string& name) {
    if (name == "estimation") return Metric::estimation;
    if (name == "direction") return Metric::direction;
    if (name == "prediction") return Metric::prediction;
    throw std::invalid_argument("unknown metric: " + name);
}

std::string to_string(Metric metric) {
    switch (metric) {
        case Metric::estimation: return "estimation";
        case Metric::direction: return "direction";
        case Metric::prediction: return "prediction";
    }
    return "?";
}

double ExperimentConfig::tolerance() const {
    if (slope_tolerance) return *slope_tolerance;
    return metric == Metric::prediction ? 0.12 : 0.10;
}

void ExperimentConfig::validate() const {
    if (n_grid.size() < 4)
        throw std::invalid_argument("config: n_grid needs at least 4 sizes");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("config: n_grid must be strictly increasing");
    if (replicates < 1)
        throw std::invalid_argument("config: replicates must be >= 1");
    if (grid_m < 3) throw std::invalid_argument("config: grid_m must be >= 3");
    if (sigma < 0.0) throw std::invalid_argument("config: sigma must be >= 0");
    if (!lambda_rule.theorem && !lambda_rule.fixed)
        throw std::invalid_argument("config: lambda_rule needs a theorem or fixed value");
    if (!beta.alpha && !beta.nu)
        throw std::invalid_argument("config: beta spec needs alpha or nu");
}

namespace {

BasisFamily parse_basis(const json& j, const char* key, BasisFamily fallback) {
    if (!j.contains(key)) return fallback;
    BasisFamily fam;
    fam.kind = basis_kind_from_string(j.at(key).get<std::string>());
    return fam;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j = json::parse(json_text);
    ExperimentConfig cfg;
    if (j.contains("kernel")) {
        const json& k = j["kernel"];
        cfg.kernel.type = k.value("type", cfg.kernel.type);
        cfg.kernel.t = k.value("t", cfg.kernel.t);
        cfg.kernel.M = k.value("M", cfg.kernel.M);
        cfg.kernel.basis = parse_basis(k, "basis", cfg.kernel.basis);
    }
    if (j.contains("covariance")) {
        const json& c = j["covariance"];
        cfg.covariance.type = c.value("type", cfg.covariance.type);
        cfg.covariance.c = c.value("c", cfg.covariance.c);
        cfg.covariance.M = c.value("M", cfg.covariance.M);
        cfg.covariance.a = c.value("a", cfg.covariance.a);
        cfg.covariance.b = c.value("b", cfg.covariance.b);
        cfg.covariance.basis = parse_basis(c, "basis", cfg.covariance.basis);
    }
    if (j.contains("link")) cfg.link = link_from_string(j["link"].get<std::string>());
    cfg.sigma = j.value("sigma", cfg.sigma);
    if (j.contains("beta")) {
        const json& b = j["beta"];
        if (b.contains("nu")) {
            cfg.beta.nu = b["nu"].get<double>();
            cfg.beta.alpha.reset();
        }
        if (b.contains("alpha")) cfg.beta.alpha = b["alpha"].get<double>();
        cfg.beta.coeff_decay = b.value("coeff_decay", cfg.beta.coeff_decay);
    }
    if (j.contains("n_grid")) cfg.n_grid = j["n_grid"].get<std::vector<int>>();
    cfg.replicates = j.value("replicates", cfg.replicates);
    if (j.contains("lambda_rule")) {
        const json& l = j["lambda_rule"];
        if (l.contains("theorem"))
            cfg.lambda_rule.theorem =
                theorem_from_string(l["theorem"].get<std::string>());
        if (l.contains("fixed")) cfg.lambda_rule.fixed = l["fixed"].get<double>();
        cfg.lambda_rule.multiplier = l.value("multiplier", 1.0);
    }
    cfg.grid_m = j.value("grid_m", cfg.grid_m);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("metric"))
        cfg.metric = metric_from_string(j["metric"].get<std::string>());
    if (j.contains("slope_tolerance"))
        cfg.slope_tolerance = j["slope_tolerance"].get<double>();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

}  // namespace findex
