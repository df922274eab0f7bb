#pragma once

// Quantum Fisher information of the evolved ensemble with respect to the bath
// inverse temperature, plus the channel-level bound and peak quantifiers.

#include "qthermo/channel.hpp"
#include "qthermo/states.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace qthermo {

// Eigenvalue pairs with lambda_i + lambda_j <= cutoff * lambda_max are outside the support.
inline constexpr double kDefaultSldCutoff = 1e-12;
// Eigenvalues in [-kPsdClip, 0) are treated as roundoff and clipped to zero.
inline constexpr double kPsdClip = 1e-10;
// Relative excess over the thermal value that counts as a transient peak.
inline constexpr double kTransientPeakExcess = 1e-6;

struct SldResult {
    OperatorMatrix sld;
    double qfi = 0.0;
    int support_rank = 0;
    // max |d rho - {rho, L}/2| over the support, in the eigenbasis of rho.
    double residual = 0.0;
    // Largest |d rho| element connecting two kernel directions. Nonzero means the
    // derivative leaves the support and the QFI is unreliable there.
    double kernel_leak = 0.0;
    bool rank_deficient = false;
};

SldResult sld(const DensityMatrix& rho, const OperatorMatrix& drho, double cutoff = kDefaultSldCutoff);

double qfi_of_state(const DensityMatrix& rho_in, const BathSpec& bath, double t,
                    PhaseConvention phase = PhaseConvention::kraus);
double qfi_at(const StateSpec& spec, const BathSpec& bath, double t,
              PhaseConvention phase = PhaseConvention::kraus);

// N (e1 - e0)^2 pi_0 pi_1 with e1 - e0 = 1.
double thermal_asymptote(const BathSpec& bath, int n_qubits);

// 1 / sqrt(nu * qfi); +infinity when qfi == 0.
double cramer_rao(double qfi, double repetitions);

struct BoundReport {
    OperatorMatrix m1;
    OperatorMatrix m2;
    double m1_norm = 0.0;
    double m2_norm = 0.0;

    // 4 (N ||M1|| + N (N-1) ||M2||^2)
    double bound_value(int n_qubits) const;
};

// M1 = sum dK^dagger dK and M2 = i sum dK^dagger K for the canonical GAD Kraus set.
// Throws DomainError at p = 0, where d sqrt(p) is singular.
BoundReport m1_m2(const BathSpec& bath, double t);

// Uniform grid of `points` samples over [0, t_max].
std::vector<double> uniform_time_grid(double t_max, int points);
// Uniform grid over [0, 20 / |lambda|].
std::vector<double> thermalization_grid(const BathSpec& bath, int points = 400);

struct PeakResult {
    double t_peak = 0.0;
    double peak_value = 0.0;
    double asymptote = 0.0;
    bool has_transient_peak = false;
    std::size_t grid_index = 0;
};

// Grid argmax of the QFI, then a golden-section search between its grid neighbours.
PeakResult max_qfi_over_time(const DensityMatrix& rho_in, const BathSpec& bath,
                             std::span<const double> time_grid);
PeakResult max_qfi_over_time(const StateSpec& spec, const BathSpec& bath,
                             std::span<const double> time_grid);

struct VQuantifier {
    double v_max = 0.0;  // peak QFI at the upper endpoint of the varied parameter
    double v_min = 0.0;  // peak QFI at the lower endpoint
    double v = 0.0;      // (v_max - v_min) / v_max
};

VQuantifier v_quantifier(const StateSpec& base, std::string_view parameter, double lower, double upper,
                         const BathSpec& bath, std::span<const double> time_grid);

}  // namespace qthermo
