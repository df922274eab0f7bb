#include "qthermo/states.hpp"

#include "qthermo/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace qthermo {

namespace {

constexpr double kDegenerateNorm = 1e-14;

void require_qubits(int n, int min_n, const char* what) {
    if (n < min_n) {
        throw DomainError(std::string(what) + ": needs at least " + std::to_string(min_n) +
                          " qubit(s), got " + std::to_string(n));
    }
}

void require_unit_interval(double v, const char* field) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw DomainError(std::string(field) + " must lie in [0, 1], got " + std::to_string(v));
    }
}

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(field) + " must be finite");
    }
}

void require_inverse_temperature(double mu, const char* field) {
    if (!std::isfinite(mu) || mu < 0.0) {
        throw DomainError(std::string(field) + " must be finite and >= 0, got " + std::to_string(mu));
    }
}

Eigen::Index dim_of(int n) { return Eigen::Index{1} << n; }

DensityMatrix projector(const Eigen::VectorXcd& psi) {
    return DensityMatrix(psi * psi.adjoint());
}

Eigen::VectorXcd tensor_power(const Eigen::VectorXcd& v, int n) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Ones(1);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd next(out.size() * v.size());
        for (Eigen::Index a = 0; a < out.size(); ++a) {
            next.segment(a * v.size(), v.size()) = out(a) * v;
        }
        out = std::move(next);
    }
    return out;
}

ThermalPopulations capped_populations(double mu) {
    if (mu >= kGroundStateMu) {
        return {1.0, 0.0};
    }
    return thermal_populations(mu);
}

}  // namespace

ThermalPopulations thermal_populations(double x) {
    // pi_0 = e^{x/2} / (e^{x/2} + e^{-x/2}) = 1 / (1 + e^{-x})
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return {1.0 / (1.0 + e), e / (1.0 + e)};
    }
    const double e = std::exp(x);
    return {e / (1.0 + e), 1.0 / (1.0 + e)};
}

std::string_view to_string(StateFamily f) {
    switch (f) {
        case StateFamily::product: return "product";
        case StateFamily::ghz: return "ghz";
        case StateFamily::identity_mixture: return "identity_mixture";
        case StateFamily::thermal_mixture: return "thermal_mixture";
        case StateFamily::k_superposition: return "k_superposition";
        case StateFamily::squeezed: return "squeezed";
        case StateFamily::maximally_mixed: return "maximally_mixed";
        case StateFamily::ground: return "ground";
    }
    return "unknown";
}

std::optional<StateFamily> parse_family(std::string_view name) {
    for (auto f : {StateFamily::product, StateFamily::ghz, StateFamily::identity_mixture,
                   StateFamily::thermal_mixture, StateFamily::k_superposition, StateFamily::squeezed,
                   StateFamily::maximally_mixed, StateFamily::ground}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

std::string_view to_string(PauliEigenstate k) {
    switch (k) {
        case PauliEigenstate::zero: return "0";
        case PauliEigenstate::one: return "1";
        case PauliEigenstate::plus: return "+";
        case PauliEigenstate::minus: return "-";
        case PauliEigenstate::right: return "r";
        case PauliEigenstate::left: return "l";
    }
    return "?";
}

std::optional<PauliEigenstate> parse_pauli_eigenstate(std::string_view name) {
    for (auto k : {PauliEigenstate::zero, PauliEigenstate::one, PauliEigenstate::plus,
                   PauliEigenstate::minus, PauliEigenstate::right, PauliEigenstate::left}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::vector<std::string_view> StateSpec::parameters_of(StateFamily family) {
    switch (family) {
        case StateFamily::product: return {"a", "r", "phi"};
        case StateFamily::identity_mixture: return {"eta"};
        case StateFamily::thermal_mixture: return {"eta", "mu"};
        case StateFamily::k_superposition: return {"alpha"};
        case StateFamily::squeezed: return {"chi", "theta"};
        case StateFamily::ghz:
        case StateFamily::maximally_mixed:
        case StateFamily::ground: return {};
    }
    return {};
}

void StateSpec::validate() const {
    const int min_n = (family == StateFamily::ghz || family == StateFamily::k_superposition) ? 2 : 1;
    if (n_qubits < min_n) {
        throw DomainError("n_qubits must be >= " + std::to_string(min_n) + " for family " +
                          std::string(to_string(family)));
    }
    switch (family) {
        case StateFamily::product:
            require_unit_interval(a, "a");
            require_unit_interval(r, "r");
            require_finite(phi, "phi");
            break;
        case StateFamily::identity_mixture:
            require_unit_interval(eta, "eta");
            break;
        case StateFamily::thermal_mixture:
            require_unit_interval(eta, "eta");
            require_inverse_temperature(mu, "mu");
            break;
        case StateFamily::k_superposition:
            require_finite(alpha, "alpha");
            break;
        case StateFamily::squeezed:
            require_finite(chi, "chi");
            require_finite(theta, "theta");
            break;
        case StateFamily::ghz:
        case StateFamily::maximally_mixed:
        case StateFamily::ground:
            break;
    }
}

double StateSpec::get(std::string_view name) const {
    if (name == "a") return a;
    if (name == "r") return r;
    if (name == "phi") return phi;
    if (name == "eta") return eta;
    if (name == "mu") return mu;
    if (name == "alpha") return alpha;
    if (name == "chi") return chi;
    if (name == "theta") return theta;
    throw DomainError("unknown state parameter '" + std::string(name) + "'");
}

void StateSpec::set(std::string_view name, double value) {
    if (name == "a") a = value;
    else if (name == "r") r = value;
    else if (name == "phi") phi = value;
    else if (name == "eta") eta = value;
    else if (name == "mu") mu = value;
    else if (name == "alpha") alpha = value;
    else if (name == "chi") chi = value;
    else if (name == "theta") theta = value;
    else throw DomainError("unknown state parameter '" + std::string(name) + "'");
}

DensityMatrix build_state(const StateSpec& spec) {
    spec.validate();
    const int n = spec.n_qubits;
    switch (spec.family) {
        case StateFamily::product: return product_state(spec.a, spec.r, spec.phi, n);
        case StateFamily::ghz: return ghz(n);
        case StateFamily::identity_mixture: return identity_mixture(spec.eta, n);
        case StateFamily::thermal_mixture: return thermal_mixture(spec.eta, spec.mu, n);
        case StateFamily::k_superposition: return k_superposition(spec.alpha, spec.k, n);
        case StateFamily::squeezed: return squeezed(spec.chi, spec.theta, n);
        case StateFamily::maximally_mixed: return maximally_mixed(n);
        case StateFamily::ground: return ground_state(n);
    }
    throw DomainError("unhandled state family");
}

DensityMatrix thermal_qubit(double mu) {
    require_inverse_temperature(mu, "mu");
    const auto pop = capped_populations(mu);
    OperatorMatrix m = OperatorMatrix::Zero(2, 2);
    m(0, 0) = pop.ground;
    m(1, 1) = pop.excited;
    return DensityMatrix(std::move(m));
}

DensityMatrix single_qubit_state(double a, double r, double phi) {
    require_unit_interval(a, "a");
    require_unit_interval(r, "r");
    require_finite(phi, "phi");
    const Complex coh = std::sqrt(a * (1.0 - a)) * r * std::polar(1.0, phi);
    OperatorMatrix m(2, 2);
    m << 1.0 - a, coh, std::conj(coh), a;
    return DensityMatrix(std::move(m));
}

DensityMatrix product_state(double a, double r, double phi, int n_qubits) {
    require_qubits(n_qubits, 1, "product_state");
    const OperatorMatrix one = single_qubit_state(a, r, phi).matrix();
    OperatorMatrix out = one;
    for (int i = 1; i < n_qubits; ++i) {
        out = kron(out, one);
    }
    return DensityMatrix(std::move(out));
}

Eigen::VectorXcd ghz_vector(int n_qubits) {
    require_qubits(n_qubits, 1, "ghz_vector");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_of(n_qubits));
    v(0) = std::numbers::sqrt2 / 2.0;
    v(v.size() - 1) += std::numbers::sqrt2 / 2.0;
    return v;
}

DensityMatrix ghz(int n_qubits) {
    require_qubits(n_qubits, 2, "ghz");
    return projector(ghz_vector(n_qubits));
}

DensityMatrix identity_mixture(double eta, int n_qubits) {
    require_unit_interval(eta, "eta");
    require_qubits(n_qubits, 1, "identity_mixture");
    const Eigen::Index d = dim_of(n_qubits);
    const Eigen::VectorXcd g = ghz_vector(n_qubits);
    OperatorMatrix m = eta * (g * g.adjoint()) +
                       ((1.0 - eta) / static_cast<double>(d)) * OperatorMatrix::Identity(d, d);
    return DensityMatrix(std::move(m));
}

DensityMatrix thermal_mixture(double eta, double mu, int n_qubits) {
    require_unit_interval(eta, "eta");
    require_inverse_temperature(mu, "mu");
    require_qubits(n_qubits, 1, "thermal_mixture");
    const auto pop = capped_populations(mu);
    const Eigen::Index d = dim_of(n_qubits);

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    psi(0) = std::sqrt(pop.ground);
    psi(d - 1) += std::sqrt(pop.excited);

    // rho_th^{otimes N} is diagonal: weight pi_0^{#zeros} pi_1^{#ones}.
    OperatorMatrix m = eta * (psi * psi.adjoint());
    for (Eigen::Index i = 0; i < d; ++i) {
        const int ones = std::popcount(static_cast<std::size_t>(i));
        m(i, i) += (1.0 - eta) * std::pow(pop.ground, n_qubits - ones) * std::pow(pop.excited, ones);
    }
    return DensityMatrix(std::move(m));
}

Eigen::VectorXcd pauli_eigenstate_vector(PauliEigenstate k) {
    const double s = std::numbers::sqrt2 / 2.0;
    const Complex i(0.0, 1.0);
    Eigen::VectorXcd v(2);
    switch (k) {
        case PauliEigenstate::zero: v << 1.0, 0.0; break;
        case PauliEigenstate::one: v << 0.0, 1.0; break;
        case PauliEigenstate::plus: v << s, s; break;
        case PauliEigenstate::minus: v << s, -s; break;
        case PauliEigenstate::right: v << s, s * i; break;
        case PauliEigenstate::left: v << s, -s * i; break;
    }
    return v;
}

Complex ghz_overlap(PauliEigenstate k, int n_qubits) {
    require_qubits(n_qubits, 1, "ghz_overlap");
    const Eigen::VectorXcd v = pauli_eigenstate_vector(k);
    // <GHZ_N| k^N> = (<0|k>^N + <1|k>^N) / sqrt(2)
    return (std::pow(v(0), n_qubits) + std::pow(v(1), n_qubits)) / std::numbers::sqrt2;
}

DensityMatrix k_superposition(double alpha, PauliEigenstate k, int n_qubits) {
    require_finite(alpha, "alpha");
    require_qubits(n_qubits, 2, "k_superposition");
    const double s = std::sin(alpha);
    const double c = std::cos(alpha);
    const double norm2 = 1.0 + 2.0 * s * c * ghz_overlap(k, n_qubits).real();
    if (norm2 <= kDegenerateNorm) {
        throw DegenerateStateError("k_superposition: normalization C(alpha, k) vanishes");
    }
    const Eigen::VectorXcd psi =
        (s * ghz_vector(n_qubits) + c * tensor_power(pauli_eigenstate_vector(k), n_qubits)) /
        std::sqrt(norm2);
    return projector(psi);
}

OperatorMatrix collective_spin(SpinAxis axis, int n_qubits) {
    require_qubits(n_qubits, 1, "collective_spin");
    const Complex i(0.0, 1.0);
    OperatorMatrix sigma(2, 2);
    switch (axis) {
        case SpinAxis::x: sigma << 0.0, 1.0, 1.0, 0.0; break;
        case SpinAxis::y: sigma << 0.0, -i, i, 0.0; break;
        case SpinAxis::z: sigma << 1.0, 0.0, 0.0, -1.0; break;
    }
    const Eigen::Index d = dim_of(n_qubits);
    OperatorMatrix j = OperatorMatrix::Zero(d, d);
    const OperatorMatrix id2 = OperatorMatrix::Identity(2, 2);
    for (int site = 0; site < n_qubits; ++site) {
        OperatorMatrix term = OperatorMatrix::Identity(1, 1);
        for (int q = 0; q < n_qubits; ++q) {
            term = kron(term, q == site ? sigma : id2);
        }
        j += 0.5 * term;
    }
    return j;
}

DensityMatrix squeezed(double chi, double theta, int n_qubits) {
    require_finite(chi, "chi");
    require_finite(theta, "theta");
    require_qubits(n_qubits, 1, "squeezed");
    const Eigen::Index d = dim_of(n_qubits);

    // One-axis twisting: J_z is diagonal with eigenvalue (#zeros - #ones) / 2.
    Eigen::VectorXcd psi(d);
    const double amp = std::pow(2.0, -0.5 * n_qubits);
    for (Eigen::Index idx = 0; idx < d; ++idx) {
        const int ones = std::popcount(static_cast<std::size_t>(idx));
        const double m = 0.5 * static_cast<double>(n_qubits - 2 * ones);
        psi(idx) = amp * std::polar(1.0, -chi * m * m);
    }

    if (theta != 0.0) {
        const auto eig = herm_eig(collective_spin(SpinAxis::y, n_qubits));
        Eigen::VectorXcd phases(d);
        for (Eigen::Index idx = 0; idx < d; ++idx) {
            phases(idx) = std::polar(1.0, -theta * eig.eigenvalues(idx));
        }
        psi = eig.eigenvectors * phases.asDiagonal() * (eig.eigenvectors.adjoint() * psi);
    }
    return projector(psi);
}

DensityMatrix reduced_squeezed_closed_form(double chi, double theta, int n_qubits) {
    require_finite(chi, "chi");
    require_finite(theta, "theta");
    require_qubits(n_qubits, 1, "reduced_squeezed_closed_form");
    const double c = std::pow(std::cos(chi), n_qubits - 1);
    OperatorMatrix m(2, 2);
    m << 0.5 * (1.0 - c * std::sin(theta)), 0.5 * c * std::cos(theta),
         0.5 * c * std::cos(theta), 0.5 * (1.0 + c * std::sin(theta));
    return DensityMatrix(std::move(m));
}

DensityMatrix maximally_mixed(int n_qubits) {
    require_qubits(n_qubits, 1, "maximally_mixed");
    const Eigen::Index d = dim_of(n_qubits);
    return DensityMatrix(OperatorMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix ground_state(int n_qubits) {
    require_qubits(n_qubits, 1, "ground_state");
    const Eigen::Index d = dim_of(n_qubits);
    OperatorMatrix m = OperatorMatrix::Zero(d, d);
    m(0, 0) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix productized(const DensityMatrix& rho) {
    OperatorMatrix out = OperatorMatrix::Identity(1, 1);
    for (int q = 0; q < rho.n_qubits(); ++q) {
        out = kron(out, partial_trace(rho, {q}).matrix());
    }
    return DensityMatrix::trusted(std::move(out));
}

}  // namespace qthermo
