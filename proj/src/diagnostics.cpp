#include "qthermo/diagnostics.hpp"

#include "qthermo/errors.hpp"

#include <cmath>
#include <cstdio>

namespace qthermo {

namespace {

constexpr double kPopulationTol = 1e-14;

void require_single_qubit(const DensityMatrix& rho, const char* what) {
    if (rho.n_qubits() != 1) {
        throw DomainError(std::string(what) + ": expected a single-qubit state");
    }
}

}  // namespace

double negativity(const DensityMatrix& rho, int qubit) {
    const auto eig = herm_eig(partial_transpose(rho, qubit));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        if (eig.eigenvalues(i) < -kNegativityFloor) {
            sum += eig.eigenvalues(i);
        }
    }
    return std::abs(sum);
}

double purity(const DensityMatrix& rho) {
    // Tr rho^2 = sum_ij |rho_ij|^2 for Hermitian rho.
    return rho.matrix().squaredNorm();
}

std::string LocalTemperature::to_csv() const {
    switch (kind) {
        case Kind::infinite: return "inf";
        case Kind::zero: return "0";
        case Kind::negative_zero: return "-0";
        case Kind::finite: break;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

LocalTemperature local_temperature(const DensityMatrix& rho1) {
    require_single_qubit(rho1, "local_temperature");
    const double r22 = rho1(1, 1).real();
    LocalTemperature out;
    if (r22 <= kPopulationTol) {
        out.kind = LocalTemperature::Kind::zero;
    } else if (r22 >= 1.0 - kPopulationTol) {
        out.kind = LocalTemperature::Kind::negative_zero;
    } else if (std::abs(r22 - 0.5) <= kPopulationTol) {
        out.kind = LocalTemperature::Kind::infinite;
    } else {
        out.value = 1.0 / std::log((1.0 - r22) / r22);
    }
    return out;
}

double local_coherence(const DensityMatrix& rho1) {
    require_single_qubit(rho1, "local_coherence");
    return std::abs(rho1(0, 1));
}

DiagnosticsRow diagnose(const DensityMatrix& rho, double t) {
    DiagnosticsRow row;
    row.t = t;
    row.purity = purity(rho);
    row.negativity = rho.n_qubits() >= 2 ? negativity(rho, 0) : 0.0;
    const DensityMatrix local = rho.n_qubits() == 1 ? rho : partial_trace(rho, {0});
    row.local_temperature = local_temperature(local);
    row.local_coherence = local_coherence(local);
    return row;
}

}  // namespace qthermo
