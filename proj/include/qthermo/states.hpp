#pragma once

// Initial-state families for the thermometer ensemble.
//
// Units: hbar = omega = k_B = 1, so the qubit levels sit at -1/2 (|0>) and +1/2 (|1>).

#include "qthermo/opalg.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qthermo {

// Local inverse temperatures at or above this are treated as exactly zero temperature.
inline constexpr double kGroundStateMu = 50.0;

struct ThermalPopulations {
    double ground;   // pi_0
    double excited;  // pi_1
};

// Boltzmann populations at inverse temperature x (any finite x; no ground-state cap).
ThermalPopulations thermal_populations(double x);

enum class StateFamily {
    product,
    ghz,
    identity_mixture,
    thermal_mixture,
    k_superposition,
    squeezed,
    maximally_mixed,
    ground,
};

// Pauli eigenstates used as |k> in the k-GHZ superposition: |0>, |1>, |+>, |->, |r>, |l>.
enum class PauliEigenstate { zero, one, plus, minus, right, left };

std::string_view to_string(StateFamily f);
std::optional<StateFamily> parse_family(std::string_view name);
std::string_view to_string(PauliEigenstate k);
std::optional<PauliEigenstate> parse_pauli_eigenstate(std::string_view name);

// Tagged description of an initial state. Only the parameters relevant to
// `family` are consulted.
struct StateSpec {
    StateFamily family = StateFamily::ground;
    int n_qubits = 1;
    double a = 0.0;
    double r = 0.0;
    double phi = 0.0;
    double eta = 0.0;
    double mu = 0.0;
    double alpha = 0.0;
    PauliEigenstate k = PauliEigenstate::zero;
    double chi = 0.0;
    double theta = 0.0;

    // Names of the real parameters the family reads.
    static std::vector<std::string_view> parameters_of(StateFamily family);

    // Throws DomainError naming the field if a relevant parameter is out of range.
    void validate() const;

    // Real-valued parameter access by name (a, r, phi, eta, mu, alpha, chi, theta).
    // Throws DomainError for unknown names.
    double get(std::string_view name) const;
    void set(std::string_view name, double value);
};

DensityMatrix build_state(const StateSpec& spec);

DensityMatrix thermal_qubit(double mu);
DensityMatrix single_qubit_state(double a, double r, double phi);
DensityMatrix product_state(double a, double r, double phi, int n_qubits);
DensityMatrix ghz(int n_qubits);
DensityMatrix identity_mixture(double eta, int n_qubits);
DensityMatrix thermal_mixture(double eta, double mu, int n_qubits);
DensityMatrix k_superposition(double alpha, PauliEigenstate k, int n_qubits);
DensityMatrix squeezed(double chi, double theta, int n_qubits);
DensityMatrix reduced_squeezed_closed_form(double chi, double theta, int n_qubits);
DensityMatrix maximally_mixed(int n_qubits);
DensityMatrix ground_state(int n_qubits);

// <GHZ_N| (|k>^{otimes N}), evaluated in closed form.
Complex ghz_overlap(PauliEigenstate k, int n_qubits);
Eigen::VectorXcd pauli_eigenstate_vector(PauliEigenstate k);
Eigen::VectorXcd ghz_vector(int n_qubits);

// Collective spin J_a = sum_i sigma_a^(i) / 2, built as a dense 2^N matrix.
enum class SpinAxis { x, y, z };
OperatorMatrix collective_spin(SpinAxis axis, int n_qubits);

// Tensor product of the single-qubit reductions of rho.
DensityMatrix productized(const DensityMatrix& rho);

}  // namespace qthermo
