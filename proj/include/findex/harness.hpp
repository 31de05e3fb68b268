#pragma once

#include <string>
#include <vector>

#include "findex/config.hpp"
#include "findex/estimator.hpp"

namespace findex {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares on (log n, log error). Requires >= 2 distinct
// abscissae and strictly positive errors.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points);

struct CellRecord {
    int n = 0;
    int replicate = 0;
    double lambda = 0.0;
    double value = 0.0;
    bool failed = false;
    std::string error;
};

struct RateSummaryRow {
    int n = 0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

struct RateReport {
    std::string metric_name;
    std::vector<CellRecord> records;       // ordered by (n, replicate)
    std::vector<RateSummaryRow> summary;   // one row per n
    double fitted_slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double theoretical_exponent = 0.0;     // positive decay exponent
    double slope_ci_lo = 0.0;              // bootstrap interval over replicates
    double slope_ci_hi = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double failed_fraction = 0.0;
    bool aborted = false;                  // > 5% failed cells
    std::string note;
};

RateReport run_rate_experiment(const ExperimentConfig& config);

// Writes raw.csv, summary.csv and plotdata.csv under the given directory.
void emit_report(const RateReport& report, const std::string& directory);

}  // namespace findex
