#pragma once

#include "qthermo/opalg.hpp"

#include <string>

namespace qthermo {

// Eigenvalues of the partial transpose above this (negative) value count as zero.
inline constexpr double kNegativityFloor = 1e-12;

// |sum of negative eigenvalues| of the partial transpose on `qubit` (one-vs-rest cut).
double negativity(const DensityMatrix& rho, int qubit);

// Tr rho^2
double purity(const DensityMatrix& rho);

// Effective temperature of a qubit from its populations, with explicit tags for the
// points where the logarithm degenerates.
struct LocalTemperature {
    enum class Kind {
        finite,
        infinite,       // rho_22 = 1/2
        zero,           // rho_22 = 0, approached from positive temperatures
        negative_zero,  // rho_22 = 1, approached from negative temperatures
    };
    Kind kind = Kind::finite;
    double value = 0.0;  // meaningful for Kind::finite

    // CSV encoding: finite values at 12 significant digits, "inf", "0", "-0".
    std::string to_csv() const;
};

LocalTemperature local_temperature(const DensityMatrix& rho1);

// |rho_01| of a single-qubit state.
double local_coherence(const DensityMatrix& rho1);

struct DiagnosticsRow {
    double t = 0.0;
    double purity = 1.0;
    double negativity = 0.0;
    LocalTemperature local_temperature;  // of qubit 0
    double local_coherence = 0.0;         // of qubit 0
};

DiagnosticsRow diagnose(const DensityMatrix& rho, double t);

}  // namespace qthermo
