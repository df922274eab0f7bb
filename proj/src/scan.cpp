#include "qthermo/scan.hpp"

#include "qthermo/diagnostics.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/metrology.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace qthermo {

namespace {

std::vector<double> scan_times(const ScanConfig& config) {
    if (config.time_points == 1) {
        return {0.0};
    }
    return uniform_time_grid(config.resolved_t_max(), config.time_points);
}

struct Cell {
    double beta;
    StateSpec spec;
    std::vector<double> sweep_values;
};

// Cells in config order: beta outermost, then sweeps in declaration order.
std::vector<Cell> enumerate_cells(const ScanConfig& config) {
    std::vector<Cell> cells;
    cells.reserve(config.cell_count());
    const std::size_t per_beta = config.cell_count() / config.betas.size();
    for (double beta : config.betas) {
        for (std::size_t flat = 0; flat < per_beta; ++flat) {
            std::vector<std::size_t> idx(config.sweeps.size());
            std::size_t rem = flat;
            for (std::size_t s = config.sweeps.size(); s-- > 0;) {
                idx[s] = rem % config.sweeps[s].values.size();
                rem /= config.sweeps[s].values.size();
            }
            Cell cell{beta, config.state_for(idx), {}};
            for (std::size_t s = 0; s < config.sweeps.size(); ++s) {
                cell.sweep_values.push_back(config.sweeps[s].values[idx[s]]);
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

// Builds every initial state up front so that bad parameter combinations are
// reported as configuration errors before any computation starts.
std::vector<DensityMatrix> build_states(const std::vector<Cell>& cells) {
    std::vector<DensityMatrix> states;
    states.reserve(cells.size());
    for (const auto& cell : cells) {
        try {
            states.push_back(build_state(cell.spec));
        } catch (const DomainError& e) {
            throw ConfigError("state", e.what());
        } catch (const DegenerateStateError& e) {
            throw ConfigError("state", e.what());
        }
    }
    return states;
}

std::vector<std::string> leading_columns(const ScanConfig& config) {
    std::vector<std::string> cols{"beta"};
    for (const auto& sw : config.sweeps) {
        cols.push_back(sw.parameter);
    }
    return cols;
}

std::vector<double> leading_values(const Cell& cell) {
    std::vector<double> row{cell.beta};
    row.insert(row.end(), cell.sweep_values.begin(), cell.sweep_values.end());
    return row;
}

std::vector<std::string> metadata_for(const ScanConfig& config, std::string_view kind) {
    std::vector<std::string> meta;
    meta.emplace_back(kToolVersion);
    meta.push_back("kind: " + std::string(kind));
    meta.push_back("units: hbar = omega = k_B = 1; time in units of 1/omega; gamma = " +
                   format_number(config.gamma));
    const bool wants_negativity = std::find(config.columns.begin(), config.columns.end(),
                                            OutputColumn::negativity) != config.columns.end();
    if (wants_negativity && config.state.n_qubits > 2) {
        meta.emplace_back("negativity: qubit 0 versus the rest of the register (extension beyond two qubits)");
    }
    meta.emplace_back("local_temperature, local_coherence: reduced state of qubit 0");
    meta.emplace_back("config:");
    std::istringstream echo(to_toml(config));
    for (std::string line; std::getline(echo, line);) {
        meta.push_back(line.empty() ? std::string() : "  " + line);
    }
    return meta;
}

double temperature_cell(const LocalTemperature& lt) {
    switch (lt.kind) {
        case LocalTemperature::Kind::finite: return lt.value;
        case LocalTemperature::Kind::infinite: return std::numeric_limits<double>::infinity();
        case LocalTemperature::Kind::zero: return 0.0;
        case LocalTemperature::Kind::negative_zero: return -0.0;
    }
    return std::nan("");
}

double bound_cell(const BathSpec& bath, double t, int n_qubits) {
    try {
        return m1_m2(bath, t).bound_value(n_qubits);
    } catch (const DomainError&) {
        return std::nan("");
    }
}

void require_finite_qfi(double v, double t) {
    if (!std::isfinite(v)) {
        throw NumericError("non-finite QFI at t = " + format_number(t));
    }
}

ScanTable assemble(std::vector<std::string> metadata, std::vector<std::string> columns,
                   std::vector<std::vector<std::vector<double>>> per_cell) {
    ScanTable table;
    table.metadata = std::move(metadata);
    table.columns = std::move(columns);
    for (auto& rows : per_cell) {
        for (auto& row : rows) {
            table.rows.push_back(std::move(row));
        }
    }
    table.metadata.insert(table.metadata.begin() + 2, "rows: " + std::to_string(table.rows.size()));
    return table;
}

}  // namespace

std::size_t ScanTable::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw std::out_of_range("no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(const ScanTable& table, std::ostream& out) {
    for (const auto& line : table.metadata) {
        out << '#' << (line.empty() ? "" : " ") << line << '\n';
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_number(row[i]);
        }
        out << '\n';
    }
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

ScanTable run_time_scan(const ScanConfig& config, const RunOptions& options) {
    config.validate();
    const auto cells = enumerate_cells(config);
    const auto states = build_states(cells);
    const auto times = scan_times(config);

    auto columns = leading_columns(config);
    columns.emplace_back("t");
    for (auto c : config.columns) {
        columns.emplace_back(to_string(c));
    }

    std::vector<std::vector<std::vector<double>>> per_cell(cells.size());
    parallel_for(cells.size(), options.threads, [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        const BathSpec bath{cell.beta, config.gamma};
        const DensityMatrix& rho_in = states[ci];
        auto& rows = per_cell[ci];
        rows.reserve(times.size());
        for (double t : times) {
            const auto evolved = evolve_with_derivative(rho_in, bath, t);
            std::optional<DiagnosticsRow> diag;
            auto diagnostics = [&]() -> const DiagnosticsRow& {
                if (!diag) {
                    diag = diagnose(evolved.rho, t);
                }
                return *diag;
            };
            std::vector<double> row = leading_values(cell);
            row.push_back(t);
            for (auto c : config.columns) {
                switch (c) {
                    case OutputColumn::qfi: {
                        const double q = sld(evolved.rho, evolved.drho_dbeta).qfi;
                        require_finite_qfi(q, t);
                        row.push_back(q);
                        break;
                    }
                    case OutputColumn::purity: row.push_back(diagnostics().purity); break;
                    case OutputColumn::negativity: row.push_back(diagnostics().negativity); break;
                    case OutputColumn::local_temperature:
                        row.push_back(temperature_cell(diagnostics().local_temperature));
                        break;
                    case OutputColumn::local_coherence: row.push_back(diagnostics().local_coherence); break;
                    case OutputColumn::bound: row.push_back(bound_cell(bath, t, rho_in.n_qubits())); break;
                }
            }
            rows.push_back(std::move(row));
        }
    });

    return assemble(metadata_for(config, "time_scan"), std::move(columns), std::move(per_cell));
}

ScanTable run_difference_scan(const ScanConfig& config, const RunOptions& options) {
    config.validate();
    if (!config.difference) {
        throw ConfigError("difference.mode", "missing");
    }
    const DifferenceMode mode = *config.difference;
    const auto cells = enumerate_cells(config);
    const auto states = build_states(cells);
    const auto times = scan_times(config);

    auto columns = leading_columns(config);
    if (mode == DifferenceMode::peak_minus_asymptote) {
        columns.insert(columns.end(), {"t_peak", "peak_qfi", "asymptote", "difference"});
    } else {
        columns.insert(columns.end(), {"t", "qfi", "qfi_productized", "difference"});
    }

    std::vector<std::vector<std::vector<double>>> per_cell(cells.size());
    parallel_for(cells.size(), options.threads, [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        const BathSpec bath{cell.beta, config.gamma};
        const DensityMatrix& rho_in = states[ci];
        auto& rows = per_cell[ci];
        if (mode == DifferenceMode::peak_minus_asymptote) {
            auto pk = max_qfi_over_time(rho_in, bath, times);
            require_finite_qfi(pk.peak_value, pk.t_peak);
            // The supremum over t includes the t -> infinity limit.
            if (pk.peak_value < pk.asymptote) {
                pk.peak_value = pk.asymptote;
                pk.t_peak = std::numeric_limits<double>::infinity();
            }
            auto row = leading_values(cell);
            row.insert(row.end(), {pk.t_peak, pk.peak_value, pk.asymptote, pk.peak_value - pk.asymptote});
            rows.push_back(std::move(row));
            return;
        }
        const DensityMatrix rho_prod = productized(rho_in);
        for (double t : times) {
            const double q = qfi_of_state(rho_in, bath, t);
            const double qp = qfi_of_state(rho_prod, bath, t);
            auto row = leading_values(cell);
            row.insert(row.end(), {t, q, qp, q - qp});
            rows.push_back(std::move(row));
        }
    });

    return assemble(metadata_for(config, std::string("difference/") + std::string(to_string(mode))),
                    std::move(columns), std::move(per_cell));
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("fit_line: need at least two (x, y) pairs of equal length");
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw DomainError("fit_line: x values are all equal");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
    }
    if (x.size() >= 3) {
        fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
    }
    return fit;
}

ScalingReport run_n_scaling(const ScalingConfig& config, const RunOptions& options) {
    config.validate();
    const BathSpec bath{config.beta, config.gamma};
    const auto grid = thermalization_grid(bath, config.time_points);
    const double t_max = grid.back();
    const double h = grid[1] - grid[0];

    ScalingReport report;
    report.config = config;
    report.results.resize(config.states.size());

    parallel_for(config.states.size(), options.threads, [&](std::size_t si) {
        const ScalingState& st = config.states[si];
        ScalingResult& res = report.results[si];
        res.label = st.label;
        res.spec = st.spec;

        StateSpec top = st.spec;
        top.n_qubits = config.n_max;
        const DensityMatrix rho_top = build_state(top);
        const auto coarse = max_qfi_over_time(rho_top, bath, grid);
        res.t_star_coarse = coarse.t_peak;

        // Re-locate the peak on a grid `refine` times denser around the coarse estimate.
        const double lo = std::max(0.0, coarse.t_peak - 2.0 * h);
        const double hi = std::min(t_max, coarse.t_peak + 2.0 * h);
        const int fine_points = std::max(3, static_cast<int>(std::lround((hi - lo) / h * config.refine)) + 1);
        std::vector<double> fine(static_cast<std::size_t>(fine_points));
        for (int i = 0; i < fine_points; ++i) {
            fine[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (fine_points - 1);
        }
        const auto refined = max_qfi_over_time(rho_top, bath, fine);
        res.t_star = refined.t_peak;
        res.t_star_is_transient = refined.has_transient_peak;
        res.t_star_shift = res.t_star > 0.0 ? std::abs(res.t_star - res.t_star_coarse) / res.t_star : 0.0;

        const int family_min =
            (st.spec.family == StateFamily::ghz || st.spec.family == StateFamily::k_superposition) ? 2 : 1;
        for (int n = std::max(config.n_min, family_min); n <= config.n_max; ++n) {
            StateSpec s = st.spec;
            s.n_qubits = n;
            const double q = qfi_of_state(build_state(s), bath, res.t_star);
            require_finite_qfi(q, res.t_star);
            res.n_values.push_back(n);
            res.qfi_values.push_back(q);
        }
        std::vector<double> xs(res.n_values.begin(), res.n_values.end());
        res.fit = fit_line(xs, res.qfi_values);
        res.exact_linear = res.fit.max_abs_residual <= kExactLinearResidual;
    });
    return report;
}

std::string to_json(const ScalingReport& report) {
    using nlohmann::json;
    json j;
    j["tool"] = kToolVersion;
    j["units"] = "hbar = omega = k_B = 1; time in units of 1/omega";
    j["beta"] = report.config.beta;
    j["gamma"] = report.config.gamma;
    j["n_min"] = report.config.n_min;
    j["n_max"] = report.config.n_max;
    j["time_points"] = report.config.time_points;
    j["refine"] = report.config.refine;
    j["asymptote_slope"] = thermal_asymptote(BathSpec{report.config.beta, report.config.gamma}, 1);
    j["config"] = to_toml(report.config);
    json states = json::array();
    for (const auto& r : report.results) {
        json s;
        s["label"] = r.label;
        s["family"] = std::string(to_string(r.spec.family));
        s["t_star"] = r.t_star;
        s["t_star_coarse"] = r.t_star_coarse;
        s["t_star_shift"] = r.t_star_shift;
        s["t_star_is_transient"] = r.t_star_is_transient;
        s["n"] = r.n_values;
        s["qfi"] = r.qfi_values;
        s["slope"] = r.fit.slope;
        s["intercept"] = r.fit.intercept;
        if (r.exact_linear || !r.fit.slope_stderr) {
            s["slope_stderr"] = nullptr;
        } else {
            s["slope_stderr"] = *r.fit.slope_stderr;
        }
        s["max_abs_residual"] = r.fit.max_abs_residual;
        s["exact_linear"] = r.exact_linear;
        states.push_back(std::move(s));
    }
    j["states"] = std::move(states);
    return j.dump(2) + "\n";
}

std::string bound_json(const BathSpec& bath, double t, int n_qubits) {
    if (n_qubits < 1) {
        throw DomainError("n must be >= 1");
    }
    const auto cp = channel_params(bath, t);
    const auto report = m1_m2(bath, t);
    using nlohmann::json;
    json j;
    j["tool"] = kToolVersion;
    j["beta"] = bath.beta;
    j["gamma"] = bath.gamma;
    j["t"] = t;
    j["n_qubits"] = n_qubits;
    j["p"] = cp.p;
    j["q"] = cp.q;
    j["lambda"] = cp.lambda;
    json m1 = json::array();
    for (Eigen::Index i = 0; i < 2; ++i) {
        m1.push_back({report.m1(i, 0).real(), report.m1(i, 1).real()});
    }
    j["m1"] = std::move(m1);
    j["m1_norm"] = report.m1_norm;
    j["m2_norm"] = report.m2_norm;
    j["m2_max_abs"] = max_abs(report.m2);
    j["bound_value"] = report.bound_value(n_qubits);
    json per_n = json::array();
    for (int n = 1; n <= n_qubits; ++n) {
        per_n.push_back(report.bound_value(n));
    }
    j["bound_value_by_n"] = std::move(per_n);
    return j.dump(2) + "\n";
}

}  // namespace qthermo
