#include "findex/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

namespace findex {

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw std::invalid_argument("fit_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [n, err] : points) {
        if (!(err > 0.0))
            throw std::invalid_argument("fit_slope: errors must be positive");
        if (!(n > 0.0))
            throw std::invalid_argument("fit_slope: abscissae must be positive");
        const double x = std::log(n);
        const double y = std::log(err);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double k = static_cast<double>(points.size());
    const double den = k * sxx - sx * sx;
    if (den <= 0.0)
        throw std::invalid_argument("fit_slope: degenerate abscissae");
    SlopeFit out;
    out.slope = (k * sxy - sx * sy) / den;
    out.intercept = (sy - out.slope * sx) / k;
    const double ss_tot = syy - sy * sy / k;
    double ss_res = 0.0;
    for (const auto& [n, err] : points) {
        const double r = std::log(err) - (out.intercept + out.slope * std::log(n));
        ss_res += r * r;
    }
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return out;
}

namespace {

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - lo;
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

// xorshift-free deterministic generator for the bootstrap only.
struct Mix64 {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

}  // namespace

RateReport run_rate_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const GridPtr grid = make_grid(cfg.grid_m);

    SpectralKernel kernel = cfg.kernel.build_spectral(
        std::min(cfg.kernel.M, cfg.grid_m / 2));
    // Aliasing guard: cos(M pi x) needs at least two grid points per period.
    if (kernel.truncation() > cfg.grid_m / 2)
        kernel.eigenvalues.conservativeResize(cfg.grid_m / 2);
    const CovarianceModel cov = cfg.covariance.build();

    // True index and theorem parameters.
    RateParams params;
    params.t = kernel.decay_exponent;
    params.c = cov.decay_exponent;
    params.alpha = cfg.beta.alpha;
    params.nu = cfg.beta.nu;

    const OperatorPair pair = build_operator_pair(
        kernel, cov, std::min(kernel.truncation(), cov.truncation()));
    const BetaStar beta =
        cfg.beta.nu
            ? make_beta_star_nu(pair, *cfg.beta.nu,
                                power_law_coeffs(pair.dim, cfg.beta.coeff_decay),
                                grid)
            : make_beta_star_alpha(
                  kernel, *cfg.beta.alpha,
                  power_law_coeffs(kernel.truncation(), cfg.beta.coeff_decay),
                  grid);

    if (params.t && params.c && kernel.basis == cov.basis) {
        params.b = *params.t + *params.c;  // commutative: b = t + c
    } else if (params.t && params.c) {
        // Noncommutative: estimate b from the fitted eigen-decay of Lambda.
        const DiagnosticsReport diag = diagnostics_report(
            pair, cfg.beta.alpha.value_or(0.5), beta.coeffs, 1e-4);
        params.b = -diag.zeta_slope;
    }

    RateReport report;
    report.metric_name =
        cfg.metric == Metric::prediction ? "prediction_sq" : to_string(cfg.metric);
    report.tolerance = cfg.tolerance();
    report.theoretical_exponent =
        cfg.lambda_rule.theorem
            ? rate_exponent(*cfg.lambda_rule.theorem, params)
            : 0.0;

    const Kernel fit_kernel = kernel;
    int failed = 0;
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        const int n = cfg.n_grid[ni];
        const double lambda =
            cfg.lambda_rule.theorem
                ? cfg.lambda_rule.multiplier *
                      lambda_schedule(*cfg.lambda_rule.theorem, params, n)
                : *cfg.lambda_rule.fixed;
        for (int r = 0; r < cfg.replicates; ++r) {
            CellRecord cell;
            cell.n = n;
            cell.replicate = r;
            cell.lambda = lambda;
            const std::uint64_t stream =
                (static_cast<std::uint64_t>(ni) << 32) | static_cast<std::uint32_t>(r);
            try {
                const Dataset ds =
                    make_dataset(cov, beta.function, cfg.link, cfg.sigma, n,
                                 derive_seed(cfg.master_seed, stream));
                const FitResult f = fit(ds, fit_kernel, lambda);
                switch (cfg.metric) {
                    case Metric::estimation:
                        cell.value = estimation_error(f.beta_hat, beta.function);
                        break;
                    case Metric::direction:
                        cell.value = direction_error(f.beta_hat, beta.function);
                        break;
                    case Metric::prediction: {
                        const double pe =
                            prediction_error(f.beta_hat, beta.function, cov);
                        cell.value = pe * pe;
                        break;
                    }
                }
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
                ++failed;
            }
            report.records.push_back(std::move(cell));
        }
    }

    const double total = static_cast<double>(cfg.n_grid.size()) * cfg.replicates;
    report.failed_fraction = failed / total;
    if (report.failed_fraction > 0.05) {
        report.aborted = true;
        report.note = "more than 5% of cells failed numerically";
        report.pass = false;
        return report;
    }

    std::vector<std::pair<double, double>> medians;
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        std::vector<double> vals;
        for (int r = 0; r < cfg.replicates; ++r) {
            const CellRecord& cell = report.records[ni * cfg.replicates + r];
            if (!cell.failed) vals.push_back(cell.value);
        }
        if (vals.empty()) {
            report.aborted = true;
            report.note = "no successful replicates at n=" +
                          std::to_string(cfg.n_grid[ni]);
            report.pass = false;
            return report;
        }
        RateSummaryRow row;
        row.n = cfg.n_grid[ni];
        row.median = quantile(vals, 0.5);
        row.q25 = quantile(vals, 0.25);
        row.q75 = quantile(vals, 0.75);
        report.summary.push_back(row);
        medians.emplace_back(static_cast<double>(row.n), row.median);
    }

    const SlopeFit sf = fit_slope(medians);
    report.fitted_slope = sf.slope;
    report.intercept = sf.intercept;
    report.r_squared = sf.r_squared;

    // Bootstrap over replicates within each n.
    constexpr int kBoot = 200;
    std::vector<double> slopes;
    slopes.reserve(kBoot);
    Mix64 rng{derive_seed(cfg.master_seed, 0xB007ull)};
    for (int bi = 0; bi < kBoot; ++bi) {
        std::vector<std::pair<double, double>> pts;
        bool ok = true;
        for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
            std::vector<double> pool;
            for (int r = 0; r < cfg.replicates; ++r) {
                const CellRecord& cell = report.records[ni * cfg.replicates + r];
                if (!cell.failed) pool.push_back(cell.value);
            }
            std::vector<double> sample(pool.size());
            for (std::size_t s = 0; s < pool.size(); ++s)
                sample[s] = pool[rng.below(pool.size())];
            const double med = quantile(sample, 0.5);
            if (!(med > 0.0)) { ok = false; break; }
            pts.emplace_back(static_cast<double>(cfg.n_grid[ni]), med);
        }
        if (ok) slopes.push_back(fit_slope(pts).slope);
    }
    report.slope_ci_lo = quantile(slopes, 0.025);
    report.slope_ci_hi = quantile(slopes, 0.975);

    report.pass = std::abs(report.fitted_slope + report.theoretical_exponent) <=
                  report.tolerance;
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void emit_report(const RateReport& report, const std::string& directory) {
    if (report.records.empty())
        throw std::invalid_argument("emit_report: empty replicate set");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec)
        throw std::runtime_error("emit_report: cannot create directory " +
                                 directory + ": " + ec.message());
    auto open = [&](const std::string& name) {
        std::ofstream out(directory + "/" + name, std::ios::trunc);
        if (!out)
            throw std::runtime_error("emit_report: cannot write " + directory +
                                     "/" + name);
        return out;
    };

    {
        std::ofstream raw = open("raw.csv");
        raw << "n,replicate,lambda,metric,value\n";
        for (const CellRecord& c : report.records) {
            if (c.failed) continue;
            raw << c.n << ',' << c.replicate << ',' << fmt(c.lambda) << ','
                << report.metric_name << ',' << fmt(c.value) << '\n';
        }
    }
    {
        std::ofstream summary = open("summary.csv");
        summary << "n,median,q25,q75\n";
        for (const RateSummaryRow& row : report.summary)
            summary << row.n << ',' << fmt(row.median) << ',' << fmt(row.q25)
                    << ',' << fmt(row.q75) << '\n';
    }
    {
        std::ofstream plot = open("plotdata.csv");
        plot << "log_n,log_median,fitted,theoretical\n";
        if (!report.summary.empty()) {
            const double x0 = std::log(static_cast<double>(report.summary.front().n));
            const double anchor = report.intercept + report.fitted_slope * x0;
            for (const RateSummaryRow& row : report.summary) {
                const double x = std::log(static_cast<double>(row.n));
                plot << fmt(x) << ',' << fmt(std::log(row.median)) << ','
                     << fmt(report.intercept + report.fitted_slope * x) << ','
                     << fmt(anchor - report.theoretical_exponent * (x - x0)) << '\n';
            }
        }
    }
}

}  // namespace findex
