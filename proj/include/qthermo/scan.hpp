#pragma once

#include "qthermo/scan_config.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qthermo {

inline constexpr std::string_view kToolVersion = "qthermo 0.1.0";

// Rows of numbers plus `#`-prefixed metadata. Non-finite cells are written as
// "inf", "-inf" or "nan"; a negative zero is written as "-0".
struct ScanTable {
    std::vector<std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    // Index of a column by name; throws std::out_of_range if absent.
    std::size_t column(std::string_view name) const;
};

void write_csv(const ScanTable& table, std::ostream& out);
std::string format_number(double v);

struct RunOptions {
    unsigned threads = 1;  // 0 = hardware concurrency
};

// One row per (beta, swept parameters, t).
ScanTable run_time_scan(const ScanConfig& config, const RunOptions& options = {});

// Requires config.difference. peak_minus_asymptote: one row per (beta, swept parameters);
// correlated_minus_productized: one row per (beta, swept parameters, t).
ScanTable run_difference_scan(const ScanConfig& config, const RunOptions& options = {});

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::optional<double> slope_stderr;  // needs at least 3 points
    double max_abs_residual = 0.0;
};

// Ordinary least squares with a free intercept.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Residual level below which a fit counts as exactly linear.
inline constexpr double kExactLinearResidual = 1e-9;

struct ScalingResult {
    std::string label;
    StateSpec spec;
    double t_star = 0.0;             // peak time of the n_max scan after refinement
    double t_star_coarse = 0.0;      // peak time on the base grid
    double t_star_shift = 0.0;       // |refined - coarse| / refined
    bool t_star_is_transient = false;
    std::vector<int> n_values;
    std::vector<double> qfi_values;  // QFI at t_star for each N
    LinearFit fit;
    bool exact_linear = false;
};

struct ScalingReport {
    ScalingConfig config;
    std::vector<ScalingResult> results;
};

ScalingReport run_n_scaling(const ScalingConfig& config, const RunOptions& options = {});

std::string to_json(const ScalingReport& report);

// Channel bound summary for the CLI `bound` subcommand.
std::string bound_json(const BathSpec& bath, double t, int n_qubits);

// Runs `task(i)` for i in [0, count) on a worker pool. Rethrows the first failure.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace qthermo
