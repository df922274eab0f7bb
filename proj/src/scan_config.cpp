#include "qthermo/scan_config.hpp"

#include "qthermo/errors.hpp"
#include "qthermo/metrology.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qthermo {

namespace {

constexpr std::string_view kStateKeys[] = {"a", "r", "phi", "eta", "mu", "alpha", "chi", "theta"};

bool is_state_parameter(std::string_view key) {
    return std::find(std::begin(kStateKeys), std::end(kStateKeys), key) != std::end(kStateKeys);
}

bool is_relevant(StateFamily family, std::string_view key) {
    const auto names = StateSpec::parameters_of(family);
    return std::find(names.begin(), names.end(), key) != names.end();
}

double as_number(const toml::node& node, const std::string& field) {
    if (auto v = node.value<double>()) {
        return *v;
    }
    throw ConfigError(field, "expected a number");
}

int as_int(const toml::node& node, const std::string& field) {
    if (auto v = node.value<int64_t>()) {
        return static_cast<int>(*v);
    }
    throw ConfigError(field, "expected an integer");
}

std::string as_string(const toml::node& node, const std::string& field) {
    if (auto v = node.value<std::string>()) {
        return *v;
    }
    throw ConfigError(field, "expected a string");
}

const toml::table& require_table(const toml::table& root, std::string_view key) {
    const auto* t = root.get_as<toml::table>(key);
    if (!t) {
        throw ConfigError(std::string(key), "missing table");
    }
    return *t;
}

std::vector<double> number_list(const toml::node& node, const std::string& field) {
    std::vector<double> out;
    if (const auto* arr = node.as_array()) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            out.push_back(as_number(*arr->get(i), field + "[" + std::to_string(i) + "]"));
        }
    } else {
        out.push_back(as_number(node, field));
    }
    return out;
}

toml::table parse_document(std::string_view text) {
    try {
        return toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << e.description() << " (line " << e.source().begin.line << ")";
        throw ConfigError("", msg.str());
    }
}

// family, n_qubits, k and real parameters from a table. `skip` lists keys owned by the caller.
StateSpec parse_state(const toml::table& t, const std::string& prefix,
                      std::initializer_list<std::string_view> skip = {}) {
    StateSpec spec;
    const auto* fam = t.get("family");
    if (!fam) {
        throw ConfigError(prefix + ".family", "missing");
    }
    const std::string fam_name = as_string(*fam, prefix + ".family");
    const auto family = parse_family(fam_name);
    if (!family) {
        throw ConfigError(prefix + ".family", "unknown family '" + fam_name + "'");
    }
    spec.family = *family;
    if (const auto* n = t.get("n_qubits")) {
        spec.n_qubits = as_int(*n, prefix + ".n_qubits");
    }
    for (const auto& [key, node] : t) {
        const std::string_view k = key.str();
        const std::string field = prefix + "." + std::string(k);
        if (k == "family" || k == "n_qubits" || std::find(skip.begin(), skip.end(), k) != skip.end()) {
            continue;
        }
        if (k == "k") {
            const std::string kv = as_string(node, field);
            const auto parsed = parse_pauli_eigenstate(kv);
            if (!parsed) {
                throw ConfigError(field, "expected one of 0, 1, +, -, r, l");
            }
            spec.k = *parsed;
        } else if (is_state_parameter(k)) {
            spec.set(k, as_number(node, field));
        } else {
            throw ConfigError(field, "unknown state parameter");
        }
    }
    return spec;
}

void insert_state(toml::table& t, const StateSpec& spec) {
    t.insert_or_assign("family", std::string(to_string(spec.family)));
    t.insert_or_assign("n_qubits", static_cast<int64_t>(spec.n_qubits));
    for (auto name : StateSpec::parameters_of(spec.family)) {
        t.insert_or_assign(name, spec.get(name));
    }
    if (spec.family == StateFamily::k_superposition) {
        t.insert_or_assign("k", std::string(to_string(spec.k)));
    }
}

std::string render(const toml::table& t) {
    std::ostringstream out;
    out << toml::toml_formatter(t, toml::format_flags::none);
    return out.str();
}

void validate_state(const StateSpec& spec, const std::string& field) {
    try {
        spec.validate();
    } catch (const DomainError& e) {
        // StateSpec messages start with the offending parameter name.
        const std::string msg = e.what();
        const std::string name = msg.substr(0, msg.find(' '));
        const bool named = name == "n_qubits" || is_state_parameter(name);
        throw ConfigError(named && field == "state" ? field + "." + name : field, msg);
    }
}

}  // namespace

std::string_view to_string(OutputColumn c) {
    switch (c) {
        case OutputColumn::qfi: return "qfi";
        case OutputColumn::purity: return "purity";
        case OutputColumn::negativity: return "negativity";
        case OutputColumn::local_temperature: return "local_temperature";
        case OutputColumn::local_coherence: return "local_coherence";
        case OutputColumn::bound: return "bound";
    }
    return "?";
}

std::optional<OutputColumn> parse_output_column(std::string_view name) {
    for (auto c : {OutputColumn::qfi, OutputColumn::purity, OutputColumn::negativity,
                   OutputColumn::local_temperature, OutputColumn::local_coherence, OutputColumn::bound}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

std::string_view to_string(DifferenceMode m) {
    switch (m) {
        case DifferenceMode::peak_minus_asymptote: return "peak_minus_asymptote";
        case DifferenceMode::correlated_minus_productized: return "correlated_minus_productized";
    }
    return "?";
}

std::optional<DifferenceMode> parse_difference_mode(std::string_view name) {
    for (auto m : {DifferenceMode::peak_minus_asymptote, DifferenceMode::correlated_minus_productized}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

void ScanConfig::validate() const {
    if (betas.empty()) {
        throw ConfigError("bath.beta", "grid must be nonempty");
    }
    for (double b : betas) {
        if (!std::isfinite(b) || b <= 0.0) {
            throw ConfigError("bath.beta", "values must be finite and > 0");
        }
    }
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw ConfigError("bath.gamma", "must be finite and > 0");
    }
    validate_state(state, "state");
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        const auto& sw = sweeps[i];
        const std::string field = "sweep[" + std::to_string(i) + "]";
        if (!is_state_parameter(sw.parameter)) {
            throw ConfigError(field + ".parameter", "unknown parameter '" + sw.parameter + "'");
        }
        if (!is_relevant(state.family, sw.parameter)) {
            throw ConfigError(field + ".parameter", "'" + sw.parameter + "' is not used by family " +
                                                        std::string(to_string(state.family)));
        }
        if (sw.values.empty()) {
            throw ConfigError(field + ".values", "grid must be nonempty");
        }
        for (double v : sw.values) {
            StateSpec probe = state;
            probe.set(sw.parameter, v);
            validate_state(probe, field + ".values");
        }
    }
    if (time_points < 1) {
        throw ConfigError("time.points", "must be >= 1");
    }
    if (t_max && !(*t_max > 0.0 && std::isfinite(*t_max))) {
        throw ConfigError("time.t_max", "must be finite and > 0");
    }
    if (columns.empty() && !difference) {
        throw ConfigError("output.columns", "no outputs requested");
    }
}

double ScanConfig::resolved_t_max() const {
    if (t_max) {
        return *t_max;
    }
    const double beta_max = *std::max_element(betas.begin(), betas.end());
    return 20.0 * relaxation_time(BathSpec{beta_max, gamma});
}

std::size_t ScanConfig::cell_count() const {
    std::size_t n = betas.size();
    for (const auto& sw : sweeps) {
        n *= sw.values.size();
    }
    return n;
}

StateSpec ScanConfig::state_for(const std::vector<std::size_t>& sweep_index) const {
    StateSpec spec = state;
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        spec.set(sweeps[i].parameter, sweeps[i].values.at(sweep_index.at(i)));
    }
    return spec;
}

void ScalingConfig::validate() const {
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw ConfigError("bath.beta", "must be finite and > 0");
    }
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw ConfigError("bath.gamma", "must be finite and > 0");
    }
    if (n_min < 1 || n_max < 2 || n_min >= n_max) {
        throw ConfigError("scaling.n_max", "need 1 <= n_min < n_max and n_max >= 2");
    }
    if (n_max > 10) {
        throw ConfigError("scaling.n_max", "dense simulation limited to 10 qubits");
    }
    if (time_points < 3) {
        throw ConfigError("scaling.points", "must be >= 3");
    }
    if (refine < 1) {
        throw ConfigError("scaling.refine", "must be >= 1");
    }
    if (states.empty()) {
        throw ConfigError("states", "at least one state required");
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        StateSpec probe = states[i].spec;
        probe.n_qubits = n_max;
        validate_state(probe, "states[" + std::to_string(i) + "]");
    }
}

ScanConfig parse_scan_config(std::string_view toml_text) {
    const toml::table root = parse_document(toml_text);
    ScanConfig cfg;

    const auto& bath = require_table(root, "bath");
    const auto* beta = bath.get("beta");
    if (!beta) {
        throw ConfigError("bath.beta", "missing");
    }
    cfg.betas = number_list(*beta, "bath.beta");
    if (const auto* g = bath.get("gamma")) {
        cfg.gamma = as_number(*g, "bath.gamma");
    }

    cfg.state = parse_state(require_table(root, "state"), "state");

    if (const auto* sweeps = root.get("sweep")) {
        const auto* arr = sweeps->as_array();
        if (!arr) {
            throw ConfigError("sweep", "expected an array of tables ([[sweep]])");
        }
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const std::string field = "sweep[" + std::to_string(i) + "]";
            const auto* t = arr->get(i)->as_table();
            if (!t) {
                throw ConfigError(field, "expected a table");
            }
            Sweep sw;
            const auto* name = t->get("parameter");
            if (!name) {
                throw ConfigError(field + ".parameter", "missing");
            }
            sw.parameter = as_string(*name, field + ".parameter");
            if (const auto* values = t->get("values")) {
                sw.values = number_list(*values, field + ".values");
            } else {
                const auto* start = t->get("start");
                const auto* stop = t->get("stop");
                const auto* count = t->get("count");
                if (!start || !stop || !count) {
                    throw ConfigError(field, "needs `values` or `start`, `stop`, `count`");
                }
                const double a = as_number(*start, field + ".start");
                const double b = as_number(*stop, field + ".stop");
                const int n = as_int(*count, field + ".count");
                if (n < 1) {
                    throw ConfigError(field + ".count", "must be >= 1");
                }
                for (int k = 0; k < n; ++k) {
                    sw.values.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
                }
            }
            cfg.sweeps.push_back(std::move(sw));
        }
    }

    if (const auto* time = root.get_as<toml::table>("time")) {
        if (const auto* pts = time->get("points")) {
            cfg.time_points = as_int(*pts, "time.points");
        }
        if (const auto* tm = time->get("t_max")) {
            cfg.t_max = as_number(*tm, "time.t_max");
        }
    }

    if (const auto* out = root.get_as<toml::table>("output")) {
        if (const auto* cols = out->get("columns")) {
            const auto* arr = cols->as_array();
            if (!arr) {
                throw ConfigError("output.columns", "expected an array of strings");
            }
            cfg.columns.clear();
            for (std::size_t i = 0; i < arr->size(); ++i) {
                const std::string field = "output.columns[" + std::to_string(i) + "]";
                const std::string name = as_string(*arr->get(i), field);
                const auto col = parse_output_column(name);
                if (!col) {
                    throw ConfigError(field, "unknown output '" + name + "'");
                }
                if (std::find(cfg.columns.begin(), cfg.columns.end(), *col) != cfg.columns.end()) {
                    throw ConfigError(field, "duplicate output '" + name + "'");
                }
                cfg.columns.push_back(*col);
            }
        }
    }

    if (const auto* diff = root.get_as<toml::table>("difference")) {
        const auto* mode = diff->get("mode");
        if (!mode) {
            throw ConfigError("difference.mode", "missing");
        }
        const std::string name = as_string(*mode, "difference.mode");
        const auto parsed = parse_difference_mode(name);
        if (!parsed) {
            throw ConfigError("difference.mode", "unknown mode '" + name + "'");
        }
        cfg.difference = *parsed;
    }

    cfg.validate();
    return cfg;
}

ScalingConfig parse_scaling_config(std::string_view toml_text) {
    const toml::table root = parse_document(toml_text);
    ScalingConfig cfg;

    const auto& bath = require_table(root, "bath");
    const auto* beta = bath.get("beta");
    if (!beta) {
        throw ConfigError("bath.beta", "missing");
    }
    cfg.beta = as_number(*beta, "bath.beta");
    if (const auto* g = bath.get("gamma")) {
        cfg.gamma = as_number(*g, "bath.gamma");
    }

    if (const auto* sc = root.get_as<toml::table>("scaling")) {
        if (const auto* v = sc->get("n_min")) cfg.n_min = as_int(*v, "scaling.n_min");
        if (const auto* v = sc->get("n_max")) cfg.n_max = as_int(*v, "scaling.n_max");
        if (const auto* v = sc->get("points")) cfg.time_points = as_int(*v, "scaling.points");
        if (const auto* v = sc->get("refine")) cfg.refine = as_int(*v, "scaling.refine");
    }

    const auto* states = root.get_as<toml::array>("states");
    if (!states) {
        throw ConfigError("states", "missing [[states]] tables");
    }
    for (std::size_t i = 0; i < states->size(); ++i) {
        const std::string field = "states[" + std::to_string(i) + "]";
        const auto* t = states->get(i)->as_table();
        if (!t) {
            throw ConfigError(field, "expected a table");
        }
        ScalingState st;
        st.spec = parse_state(*t, field, {"label"});
        if (const auto* label = t->get("label")) {
            st.label = as_string(*label, field + ".label");
        } else {
            st.label = std::string(to_string(st.spec.family));
        }
        cfg.states.push_back(std::move(st));
    }

    cfg.validate();
    return cfg;
}

std::string to_toml(const ScanConfig& config) {
    toml::table root;

    toml::table bath;
    toml::array betas;
    for (double b : config.betas) {
        betas.push_back(b);
    }
    bath.insert_or_assign("beta", std::move(betas));
    bath.insert_or_assign("gamma", config.gamma);
    root.insert_or_assign("bath", std::move(bath));

    toml::table state;
    insert_state(state, config.state);
    root.insert_or_assign("state", std::move(state));

    if (!config.sweeps.empty()) {
        toml::array sweeps;
        for (const auto& sw : config.sweeps) {
            toml::table t;
            t.insert_or_assign("parameter", sw.parameter);
            toml::array values;
            for (double v : sw.values) {
                values.push_back(v);
            }
            t.insert_or_assign("values", std::move(values));
            sweeps.push_back(std::move(t));
        }
        root.insert_or_assign("sweep", std::move(sweeps));
    }

    toml::table time;
    time.insert_or_assign("points", static_cast<int64_t>(config.time_points));
    if (config.t_max) {
        time.insert_or_assign("t_max", *config.t_max);
    }
    root.insert_or_assign("time", std::move(time));

    toml::table output;
    toml::array cols;
    for (auto c : config.columns) {
        cols.push_back(std::string(to_string(c)));
    }
    output.insert_or_assign("columns", std::move(cols));
    root.insert_or_assign("output", std::move(output));

    if (config.difference) {
        toml::table diff;
        diff.insert_or_assign("mode", std::string(to_string(*config.difference)));
        root.insert_or_assign("difference", std::move(diff));
    }
    return render(root);
}

std::string to_toml(const ScalingConfig& config) {
    toml::table root;
    toml::table bath;
    bath.insert_or_assign("beta", config.beta);
    bath.insert_or_assign("gamma", config.gamma);
    root.insert_or_assign("bath", std::move(bath));

    toml::table sc;
    sc.insert_or_assign("n_min", static_cast<int64_t>(config.n_min));
    sc.insert_or_assign("n_max", static_cast<int64_t>(config.n_max));
    sc.insert_or_assign("points", static_cast<int64_t>(config.time_points));
    sc.insert_or_assign("refine", static_cast<int64_t>(config.refine));
    root.insert_or_assign("scaling", std::move(sc));

    toml::array states;
    for (const auto& st : config.states) {
        toml::table t;
        t.insert_or_assign("label", st.label);
        insert_state(t, st.spec);
        states.push_back(std::move(t));
    }
    root.insert_or_assign("states", std::move(states));
    return render(root);
}

}  // namespace qthermo
