// Command-line front end: simulate datasets, fit user data, run Monte Carlo
// rate experiments, sweep spectral diagnostics, and check Stein's identity.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "findex/config.hpp"
#include "findex/estimator.hpp"
#include "findex/harness.hpp"
#include "json.hpp"

namespace {

using namespace findex;
using nlohmann::json;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void write_grid_function(const GridFunction& f, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "x,value\n";
    for (int p = 0; p < f.size(); ++p)
        out << fmt(f.grid().points[p]) << ',' << fmt(f[p]) << '\n';
}

// Wide curve format: x column plus one column per curve.
void write_curves(const Dataset& ds, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "x";
    for (int i = 0; i < ds.n(); ++i) out << ",curve_" << (i + 1);
    out << '\n';
    for (int p = 0; p < ds.grid->m; ++p) {
        out << fmt(ds.grid->points[p]);
        for (int i = 0; i < ds.n(); ++i) out << ',' << fmt(ds.curves(i, p));
        out << '\n';
    }
}

std::vector<double> split_row(const std::string& line) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    return row;
}

std::pair<GridPtr, Eigen::MatrixXd> read_curves(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty curves file");
    std::vector<std::vector<double>> rows;  // one per grid point: x, X_1..X_n
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(split_row(line));
        if (rows.back().size() < 2 || rows.back().size() != rows.front().size())
            throw std::runtime_error(path + ": ragged curve row");
    }
    if (rows.empty()) throw std::runtime_error(path + ": no grid rows");
    const int m = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows.front().size()) - 1;
    const GridPtr grid = make_grid(m);
    Eigen::MatrixXd curves(n, m);
    for (int p = 0; p < m; ++p)
        for (int i = 0; i < n; ++i) curves(i, p) = rows[p][i + 1];
    return {grid, curves};
}

Eigen::VectorXd read_responses(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "y") continue;
        vals.push_back(std::stod(line));
    }
    Eigen::VectorXd y(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        y[static_cast<int>(i)] = vals[i];
    return y;
}

BetaStar build_beta(const ExperimentConfig& cfg, const SpectralKernel& kernel,
                    const CovarianceModel& cov, const GridPtr& grid) {
    if (cfg.beta.nu) {
        const OperatorPair pair = build_operator_pair(
            kernel, cov, std::min(kernel.truncation(), cov.truncation()));
        return make_beta_star_nu(pair, *cfg.beta.nu,
                                 power_law_coeffs(pair.dim, cfg.beta.coeff_decay),
                                 grid);
    }
    return make_beta_star_alpha(
        kernel, *cfg.beta.alpha,
        power_law_coeffs(kernel.truncation(), cfg.beta.coeff_decay), grid);
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 int n_override) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    const GridPtr grid = make_grid(cfg.grid_m);
    const SpectralKernel kernel = cfg.kernel.build_spectral(cfg.grid_m / 2);
    const CovarianceModel cov = cfg.covariance.build();
    const BetaStar beta = build_beta(cfg, kernel, cov, grid);
    const int n = n_override > 0 ? n_override : cfg.n_grid.front();
    const Dataset ds = make_dataset(cov, beta.function, cfg.link, cfg.sigma, n,
                                    derive_seed(cfg.master_seed, 0));

    std::filesystem::create_directories(out_dir);
    write_curves(ds, out_dir + "/curves.csv");
    {
        std::ofstream out = open_out(out_dir + "/responses.csv");
        out << "y\n";
        for (int i = 0; i < ds.n(); ++i) out << fmt(ds.responses[i]) << '\n';
    }
    write_grid_function(beta.function, out_dir + "/beta_star.csv");
    json meta{{"n", n},
              {"grid_m", cfg.grid_m},
              {"link", to_string(cfg.link)},
              {"sigma", cfg.sigma},
              {"master_seed", cfg.master_seed}};
    open_out(out_dir + "/meta.json") << meta.dump(2) << '\n';
    std::cout << "wrote dataset (n=" << n << ", m=" << cfg.grid_m << ") to "
              << out_dir << '\n';
    return 0;
}

int cmd_fit(const std::string& curves_path, const std::string& responses_path,
            const std::string& config_path, double lambda,
            const std::string& out_dir) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    auto [grid, curves] = read_curves(curves_path);
    const Eigen::VectorXd y = read_responses(responses_path);
    if (y.size() != curves.rows())
        throw std::invalid_argument("responses/curves row count mismatch");

    Dataset ds{grid, curves, y, GridFunction(grid), DatasetMeta{}};
    const Kernel kernel = cfg.kernel.build_spectral(grid->m / 2);
    const FitResult result = fit(ds, kernel, lambda);

    std::filesystem::create_directories(out_dir);
    write_grid_function(result.beta_hat, out_dir + "/beta_hat.csv");
    json summary{{"lambda", result.lambda},
                 {"residual", result.solve_residual},
                 {"gram_cond", result.gram_cond}};
    open_out(out_dir + "/summary.json") << summary.dump(2) << '\n';
    std::cout << summary.dump() << '\n';
    return 0;
}

int cmd_rates(const std::string& config_path, const std::string& out_dir) {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    const RateReport report = run_rate_experiment(cfg);
    if (!out_dir.empty()) emit_report(report, out_dir);
    json summary{{"metric", report.metric_name},
                 {"fitted_slope", report.fitted_slope},
                 {"theoretical_exponent", report.theoretical_exponent},
                 {"slope_ci", {report.slope_ci_lo, report.slope_ci_hi}},
                 {"r_squared", report.r_squared},
                 {"tolerance", report.tolerance},
                 {"failed_fraction", report.failed_fraction},
                 {"aborted", report.aborted},
                 {"pass", report.pass}};
    if (!report.note.empty()) summary["note"] = report.note;
    std::cout << summary.dump(2) << '\n';
    return report.pass ? 0 : 1;
}

int cmd_diagnostics(const std::string& config_path, const std::string& out_csv,
                    double lambda_min, double lambda_max, int count) {
    if (!(lambda_min > 0) || !(lambda_max > lambda_min) || count < 2)
        throw std::invalid_argument("need 0 < lambda-min < lambda-max, count >= 2");
    const ExperimentConfig cfg = load_experiment_config(config_path);
    const GridPtr grid = make_grid(cfg.grid_m);
    const SpectralKernel kernel = cfg.kernel.build_spectral(100);
    const CovarianceModel cov = cfg.covariance.build();
    const OperatorPair pair = build_operator_pair(
        kernel, cov, std::min(kernel.truncation(), cov.truncation()));
    const BetaStar beta = build_beta(cfg, kernel, cov, grid);
    const double alpha = cfg.beta.alpha.value_or(0.5);

    std::ofstream out = open_out(out_csv);
    out << "lambda,N_lambda,d_lambda,theta_trace,theta_norm,xi_norm,bias\n";
    double zeta_slope = 0.0;
    for (int i = 0; i < count; ++i) {
        const double s = static_cast<double>(i) / (count - 1);
        const double lam =
            std::exp(std::log(lambda_min) +
                     s * (std::log(lambda_max) - std::log(lambda_min)));
        const DiagnosticsReport d = diagnostics_report(pair, alpha, beta.coeffs, lam);
        zeta_slope = d.zeta_slope;
        out << fmt(d.lambda) << ',' << fmt(d.N_lambda) << ',' << fmt(d.d_lambda)
            << ',' << fmt(d.theta_trace) << ',' << fmt(d.theta_norm) << ','
            << fmt(d.xi_norm) << ',' << fmt(d.bias) << '\n';
    }
    json summary{{"zeta_slope", zeta_slope},
                 {"dim", pair.dim},
                 {"beta_reference", cfg.link == Link::identity
                                        ? "beta_star"
                                        : "beta_star (unscaled; see stein-check)"}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_stein(const std::string& config_path, int n, double min_cosine) {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    const GridPtr grid = make_grid(cfg.grid_m);
    const SpectralKernel kernel = cfg.kernel.build_spectral(cfg.grid_m / 2);
    const CovarianceModel cov = cfg.covariance.build();
    const BetaStar beta = build_beta(cfg, kernel, cov, grid);
    const Dataset ds = make_dataset(cov, beta.function, cfg.link, cfg.sigma,
                                    n > 0 ? n : 10000,
                                    derive_seed(cfg.master_seed, 0));
    const SteinCheck check = stein_check(ds, beta.function, cov);
    const bool pass = check.cosine_similarity >= min_cosine;
    json summary{{"cosine_similarity", check.cosine_similarity},
                 {"ratio_estimate", check.ratio_estimate},
                 {"min_cosine", min_cosine},
                 {"pass", pass}};
    std::cout << summary.dump(2) << '\n';
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional index-model estimation and rate experiments"};
    app.require_subcommand(1);

    std::string config, out_dir = "findex_out", curves, responses, out_csv;
    int n = 0, count = 25;
    double lambda = 1e-3, lambda_min = 1e-6, lambda_max = 1e-1, min_cosine = 0.9;

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
    sim->add_option("--config", config, "experiment config (JSON)")->required();
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("-n,--n", n, "sample size (default: first n_grid entry)");

    auto* fit_cmd = app.add_subcommand("fit", "Fit the penalized estimator");
    fit_cmd->add_option("--curves", curves, "curves CSV")->required();
    fit_cmd->add_option("--responses", responses, "responses CSV")->required();
    fit_cmd->add_option("--config", config, "experiment config (JSON)")->required();
    fit_cmd->add_option("--lambda", lambda, "regularization parameter");
    fit_cmd->add_option("--out", out_dir, "output directory");

    auto* rates = app.add_subcommand("rates", "Run a Monte Carlo rate experiment");
    rates->add_option("--config", config, "experiment config (JSON)")->required();
    rates->add_option("--out", out_dir, "report directory");

    auto* diag = app.add_subcommand("diagnostics", "Spectral diagnostics sweep");
    diag->add_option("--config", config, "experiment config (JSON)")->required();
    diag->add_option("--out", out_csv, "output CSV path")->required();
    diag->add_option("--lambda-min", lambda_min, "smallest lambda");
    diag->add_option("--lambda-max", lambda_max, "largest lambda");
    diag->add_option("--count", count, "lambda grid size");

    auto* stein = app.add_subcommand("stein-check", "Check Stein's identity");
    stein->add_option("--config", config, "experiment config (JSON)")->required();
    stein->add_option("-n,--n", n, "sample size");
    stein->add_option("--min-cosine", min_cosine, "pass threshold");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(config, out_dir, n);
        if (fit_cmd->parsed())
            return cmd_fit(curves, responses, config, lambda, out_dir);
        if (rates->parsed()) return cmd_rates(config, out_dir);
        if (diag->parsed())
            return cmd_diagnostics(config, out_csv, lambda_min, lambda_max, count);
        if (stein->parsed()) return cmd_stein(config, n, min_cosine);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
