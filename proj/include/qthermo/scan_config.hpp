#pragma once

// Declarative scan configurations, read from and written to TOML.
//
// Scan / difference file:
//
//   [bath]
//   beta = [0.3, 0.4, 0.5]        # scalar or array
//   gamma = 1.0
//
//   [state]
//   family = "identity_mixture"
//   n_qubits = 2
//   eta = 0.0                      # fixed parameters; k = "+" for k_superposition
//
//   [[sweep]]                      # zero or more; cartesian product, first is outermost
//   parameter = "eta"
//   values = [0.0, 0.2, 0.4]       # or: start = 0.0, stop = 1.0, count = 6
//
//   [time]
//   points = 400                   # default 400
//   t_max = 5.0                    # default 20/|lambda| at the largest beta
//
//   [output]
//   columns = ["qfi", "purity", "negativity"]
//
//   [difference]                   # only for the `diff` subcommand
//   mode = "peak_minus_asymptote"  # or "correlated_minus_productized"
//
// Scaling file: [bath] (scalar beta), [scaling] with n_min, n_max, points, refine,
// and one [[states]] table per initial state (label, family, parameters).

#include "qthermo/channel.hpp"
#include "qthermo/states.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qthermo {

enum class OutputColumn { qfi, purity, negativity, local_temperature, local_coherence, bound };

std::string_view to_string(OutputColumn c);
std::optional<OutputColumn> parse_output_column(std::string_view name);

enum class DifferenceMode { peak_minus_asymptote, correlated_minus_productized };

std::string_view to_string(DifferenceMode m);
std::optional<DifferenceMode> parse_difference_mode(std::string_view name);

struct Sweep {
    std::string parameter;
    std::vector<double> values;
};

inline constexpr int kDefaultTimePoints = 400;

struct ScanConfig {
    std::vector<double> betas;
    double gamma = 1.0;
    StateSpec state;
    std::vector<Sweep> sweeps;
    int time_points = kDefaultTimePoints;
    std::optional<double> t_max;
    std::vector<OutputColumn> columns{OutputColumn::qfi};
    std::optional<DifferenceMode> difference;

    // Throws ConfigError naming the offending field.
    void validate() const;

    // Explicit t_max, or 20/|lambda| at the largest beta in the grid.
    double resolved_t_max() const;

    // Number of (beta, swept-parameter) cells.
    std::size_t cell_count() const;

    // State for the cell with the given sweep indices (one per sweep, outermost first).
    StateSpec state_for(const std::vector<std::size_t>& sweep_index) const;
};

struct ScalingState {
    std::string label;
    StateSpec spec;  // n_qubits is overridden per point of the N range
};

struct ScalingConfig {
    double beta = 0.5;
    double gamma = 1.0;
    int n_min = 1;
    int n_max = 6;
    int time_points = kDefaultTimePoints;
    int refine = 4;
    std::vector<ScalingState> states;

    void validate() const;
};

ScanConfig parse_scan_config(std::string_view toml_text);
ScalingConfig parse_scaling_config(std::string_view toml_text);

// Canonical TOML rendering; parsing it back yields an equivalent configuration.
std::string to_toml(const ScanConfig& config);
std::string to_toml(const ScalingConfig& config);

}  // namespace qthermo
