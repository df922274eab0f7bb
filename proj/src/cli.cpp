#include "qthermo/cli.hpp"

#include "qthermo/errors.hpp"
#include "qthermo/scan.hpp"
#include "qthermo/selftest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace qthermo {

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    unsigned threads = 1;
    std::optional<double> beta;
    std::optional<double> gamma;
    std::optional<int> n;
    std::optional<double> t;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("--config", "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Options& opt, std::ostream& out, const std::string& text) {
    if (opt.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opt.out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw ConfigError("--out", "cannot write '" + opt.out_path + "'");
    }
    file << text;
    if (!file.flush()) {
        throw ConfigError("--out", "write failed for '" + opt.out_path + "'");
    }
}

ScanConfig load_scan(const Options& opt) {
    ScanConfig cfg = parse_scan_config(read_file(opt.config_path));
    if (opt.beta) cfg.betas = {*opt.beta};
    if (opt.gamma) cfg.gamma = *opt.gamma;
    if (opt.n) cfg.state.n_qubits = *opt.n;
    if (opt.t) cfg.t_max = *opt.t;
    cfg.validate();
    return cfg;
}

ScalingConfig load_scaling(const Options& opt) {
    ScalingConfig cfg = parse_scaling_config(read_file(opt.config_path));
    if (opt.beta) cfg.beta = *opt.beta;
    if (opt.gamma) cfg.gamma = *opt.gamma;
    if (opt.n) cfg.n_max = *opt.n;
    cfg.validate();
    return cfg;
}

std::string table_text(const ScanTable& table) {
    std::ostringstream ss;
    write_csv(table, ss);
    return ss.str();
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonequilibrium thermometry with GAD-thermalized qubit ensembles", "qthermo"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Options opt;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opt.config_path, "TOML configuration file");
        if (needs_config) {
            c->required()->check(CLI::ExistingFile);
        }
        sub->add_option("--out", opt.out_path, "output path (default: stdout)");
        sub->add_option("--threads", opt.threads, "worker threads, 0 = auto")->capture_default_str();
    };

    auto* scan = app.add_subcommand("scan", "QFI and diagnostics over time for a parameter grid");
    add_common(scan, true);
    scan->add_option("--beta", opt.beta, "override: single bath inverse temperature");
    scan->add_option("--gamma", opt.gamma, "override: relaxation rate");
    scan->add_option("--n", opt.n, "override: number of qubits");
    scan->add_option("--t", opt.t, "override: end of the time grid");

    auto* diff = app.add_subcommand("diff", "peak-minus-asymptote or correlated-minus-productized QFI");
    add_common(diff, true);
    diff->add_option("--beta", opt.beta, "override: single bath inverse temperature");
    diff->add_option("--gamma", opt.gamma, "override: relaxation rate");
    diff->add_option("--n", opt.n, "override: number of qubits");
    diff->add_option("--t", opt.t, "override: end of the time grid");

    auto* scaling = app.add_subcommand("scaling", "QFI at the optimal time versus N, with linear fits");
    add_common(scaling, true);
    scaling->add_option("--beta", opt.beta, "override: bath inverse temperature");
    scaling->add_option("--gamma", opt.gamma, "override: relaxation rate");
    scaling->add_option("--n", opt.n, "override: largest N");

    auto* bound = app.add_subcommand("bound", "channel QFI bound terms as JSON");
    bound->add_option("--out", opt.out_path, "output path (default: stdout)");
    bound->add_option("--beta", opt.beta, "bath inverse temperature")->required();
    bound->add_option("--gamma", opt.gamma, "relaxation rate (default 1)");
    bound->add_option("--t", opt.t, "time")->required();
    bound->add_option("--n", opt.n, "number of qubits (default 1)");

    auto* selftest = app.add_subcommand("selftest", "run the built-in invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "qthermo: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        const RunOptions run{opt.threads};
        if (*scan) {
            emit(opt, out, table_text(run_time_scan(load_scan(opt), run)));
        } else if (*diff) {
            emit(opt, out, table_text(run_difference_scan(load_scan(opt), run)));
        } else if (*scaling) {
            emit(opt, out, to_json(run_n_scaling(load_scaling(opt), run)));
        } else if (*bound) {
            const BathSpec bath{*opt.beta, opt.gamma.value_or(1.0)};
            bath.validate();
            emit(opt, out, bound_json(bath, *opt.t, opt.n.value_or(1)));
        } else if (*selftest) {
            bool all = true;
            for (const auto& c : run_selftest()) {
                out << (c.passed ? "ok   " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
                all = all && c.passed;
            }
            return all ? kExitOk : 1;
        }
    } catch (const ConfigError& e) {
        err << "qthermo: config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const DomainError& e) {
        err << "qthermo: invalid input: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "qthermo: numeric failure: " << e.what() << '\n';
        return kExitNumericError;
    }
    return kExitOk;
}

}  // namespace qthermo
