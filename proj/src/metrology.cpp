#include "qthermo/metrology.hpp"

#include "qthermo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qthermo {

SldResult sld(const DensityMatrix& rho, const OperatorMatrix& drho, double cutoff) {
    if (drho.rows() != rho.dim() || drho.cols() != rho.dim()) {
        throw ContractViolation("sld: derivative has wrong dimension");
    }
    if (hermiticity_defect(drho) > 1e-8) {
        throw ContractViolation("sld: derivative not Hermitian");
    }
    if (std::abs(drho.trace()) > 1e-8) {
        throw ContractViolation("sld: derivative not traceless");
    }

    auto eig = herm_eig(rho.matrix());
    RealVector& lam = eig.eigenvalues;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -kPsdClip) {
            throw NumericError("sld: state has eigenvalue " + std::to_string(lam(i)) +
                               " below the PSD tolerance");
        }
        lam(i) = std::max(lam(i), 0.0);
    }
    const double threshold = cutoff * lam.maxCoeff();
    const OperatorMatrix& v = eig.eigenvectors;
    const OperatorMatrix d = v.adjoint() * drho * v;

    SldResult out;
    out.support_rank = static_cast<int>((lam.array() > threshold).count());
    OperatorMatrix l_eig = OperatorMatrix::Zero(d.rows(), d.cols());
    double qfi = 0.0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.cols(); ++j) {
            const double s = lam(i) + lam(j);
            if (s > threshold) {
                l_eig(i, j) = 2.0 * d(i, j) / s;
                qfi += 2.0 * std::norm(d(i, j)) / s;
            } else {
                out.kernel_leak = std::max(out.kernel_leak, std::abs(d(i, j)));
            }
        }
    }
    out.rank_deficient = out.kernel_leak > 1e-8;
    out.qfi = qfi;
    out.sld = v * l_eig * v.adjoint();

    const OperatorMatrix& r = rho.matrix();
    const OperatorMatrix lyap = drho - 0.5 * (r * out.sld + out.sld * r);
    const OperatorMatrix lyap_eig = v.adjoint() * lyap * v;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.cols(); ++j) {
            if (lam(i) + lam(j) > threshold) {
                out.residual = std::max(out.residual, std::abs(lyap_eig(i, j)));
            }
        }
    }
    return out;
}

double qfi_of_state(const DensityMatrix& rho_in, const BathSpec& bath, double t, PhaseConvention phase) {
    const auto evolved = evolve_with_derivative(rho_in, bath, t, phase);
    const double qfi = sld(evolved.rho, evolved.drho_dbeta).qfi;
    if (!std::isfinite(qfi)) {
        throw NumericError("non-finite QFI at t = " + std::to_string(t));
    }
    return qfi;
}

double qfi_at(const StateSpec& spec, const BathSpec& bath, double t, PhaseConvention phase) {
    return qfi_of_state(build_state(spec), bath, t, phase);
}

double thermal_asymptote(const BathSpec& bath, int n_qubits) {
    bath.validate();
    const auto pop = thermal_populations(bath.beta);
    return static_cast<double>(n_qubits) * pop.ground * pop.excited;
}

double cramer_rao(double qfi, double repetitions) {
    if (!(repetitions >= 1.0)) {
        throw DomainError("cramer_rao: repetitions must be >= 1");
    }
    if (!(qfi >= 0.0)) {
        throw DomainError("cramer_rao: QFI must be >= 0");
    }
    if (qfi == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / std::sqrt(repetitions * qfi);
}

double BoundReport::bound_value(int n_qubits) const {
    const double n = n_qubits;
    return 4.0 * (n * m1_norm + n * (n - 1.0) * m2_norm * m2_norm);
}

BoundReport m1_m2(const BathSpec& bath, double t) {
    const auto cp = channel_params(bath, t);
    if (!(cp.p > 0.0)) {
        throw DomainError("m1_m2: Kraus derivatives are singular at p = 0 (t = 0)");
    }
    const auto der = channel_derivatives(bath, t);
    const auto pop = thermal_populations(bath.beta);
    const double q = pop.ground;
    const double q1 = pop.excited;
    const double sq = std::sqrt(q);
    const double sq1 = std::sqrt(q1);
    const double sp = std::sqrt(cp.p);
    const double sp1 = std::sqrt(cp.survival);

    const double d_sq = der.dq / (2.0 * sq);
    const double d_sq1 = -der.dq / (2.0 * sq1);
    const double d_sp = der.dp / (2.0 * sp);
    // d sqrt(e^{lambda t}) = (t/2) dlambda sqrt(e^{lambda t}); finite even where 1 - p underflows.
    const double d_sp1 = 0.5 * t * der.dlambda * sp1;

    const auto k = kraus_ops(cp);
    std::array<OperatorMatrix, 4> dk;
    for (auto& m : dk) {
        m = OperatorMatrix::Zero(2, 2);
    }
    dk[0](0, 0) = d_sq;
    dk[0](1, 1) = d_sq * sp1 + sq * d_sp1;
    dk[1](0, 1) = d_sq * sp + sq * d_sp;
    dk[2](0, 0) = d_sq1 * sp1 + sq1 * d_sp1;
    dk[2](1, 1) = d_sq1;
    dk[3](1, 0) = d_sq1 * sp + sq1 * d_sp;

    BoundReport report;
    report.m1 = OperatorMatrix::Zero(2, 2);
    report.m2 = OperatorMatrix::Zero(2, 2);
    const Complex i(0.0, 1.0);
    for (std::size_t a = 0; a < k.size(); ++a) {
        report.m1 += dk[a].adjoint() * dk[a];
        report.m2 += i * (dk[a].adjoint() * k[a]);
    }
    report.m1_norm = op_norm(report.m1);
    report.m2_norm = op_norm(report.m2);
    return report;
}

std::vector<double> uniform_time_grid(double t_max, int points) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw DomainError("time grid needs a finite t_max > 0");
    }
    if (points < 2) {
        throw DomainError("time grid needs at least 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

std::vector<double> thermalization_grid(const BathSpec& bath, int points) {
    return uniform_time_grid(20.0 * relaxation_time(bath), points);
}

namespace {

// Golden-section search for the maximum of f on [lo, hi], assumed unimodal there.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-10 * std::max(1.0, std::abs(hi))) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

PeakResult max_qfi_over_time(const DensityMatrix& rho_in, const BathSpec& bath,
                             std::span<const double> time_grid) {
    if (time_grid.empty()) {
        throw DomainError("max_qfi_over_time: empty time grid");
    }
    std::vector<double> values(time_grid.size());
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
        values[i] = qfi_of_state(rho_in, bath, time_grid[i]);
    }
    const auto best = static_cast<std::size_t>(
        std::distance(values.begin(), std::max_element(values.begin(), values.end())));

    PeakResult out;
    out.grid_index = best;
    out.t_peak = time_grid[best];
    out.peak_value = values[best];
    out.asymptote = thermal_asymptote(bath, rho_in.n_qubits());
    if (best > 0 && best + 1 < time_grid.size()) {
        const auto [tv, fv] = golden_max([&](double t) { return qfi_of_state(rho_in, bath, t); },
                                         time_grid[best - 1], time_grid[best + 1]);
        if (fv > out.peak_value) {
            out.t_peak = tv;
            out.peak_value = fv;
        }
    }
    out.has_transient_peak = out.peak_value > out.asymptote * (1.0 + kTransientPeakExcess);
    return out;
}

PeakResult max_qfi_over_time(const StateSpec& spec, const BathSpec& bath,
                             std::span<const double> time_grid) {
    return max_qfi_over_time(build_state(spec), bath, time_grid);
}

VQuantifier v_quantifier(const StateSpec& base, std::string_view parameter, double lower, double upper,
                         const BathSpec& bath, std::span<const double> time_grid) {
    StateSpec lo = base;
    StateSpec hi = base;
    lo.set(parameter, lower);
    hi.set(parameter, upper);
    VQuantifier out;
    out.v_max = max_qfi_over_time(hi, bath, time_grid).peak_value;
    out.v_min = max_qfi_over_time(lo, bath, time_grid).peak_value;
    if (out.v_max == 0.0) {
        throw NumericError("v_quantifier: peak QFI at the upper endpoint is zero");
    }
    out.v = (out.v_max - out.v_min) / out.v_max;
    return out;
}

}  // namespace qthermo
