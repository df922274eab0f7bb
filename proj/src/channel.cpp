#include "qthermo/channel.hpp"

#include "qthermo/errors.hpp"
#include "qthermo/states.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qthermo {

namespace {

void require_time(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw DomainError("time must be finite and >= 0, got " + std::to_string(t));
    }
}

void require_single_qubit(const DensityMatrix& rho, const char* what) {
    if (rho.n_qubits() != 1) {
        throw DomainError(std::string(what) + ": expected a single-qubit state");
    }
}

// Real block map for populations (a = rho_00, d = rho_11) plus a coherence factor.
LocalSuperop block_map(double aa, double ad, double da, double dd, Complex c01, Complex c10) {
    LocalSuperop s = LocalSuperop::Zero();
    s(0, 0) = aa;
    s(0, 3) = ad;
    s(3, 0) = da;
    s(3, 3) = dd;
    s(1, 1) = c01;
    s(2, 2) = c10;
    return s;
}

}  // namespace

void BathSpec::validate() const {
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw DomainError("beta must be finite and > 0, got " + std::to_string(beta));
    }
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw DomainError("gamma must be finite and > 0, got " + std::to_string(gamma));
    }
}

ChannelParams channel_params(const BathSpec& bath, double t) {
    bath.validate();
    require_time(t);
    ChannelParams params;
    params.t = t;
    params.lambda = -bath.gamma / std::tanh(0.5 * bath.beta);
    params.p = -std::expm1(params.lambda * t);
    params.survival = std::exp(params.lambda * t);
    params.q = thermal_populations(bath.beta).ground;
    return params;
}

ChannelParams ChannelParams::from_pq(double p, double q) {
    ChannelParams params;
    params.p = p;
    params.q = q;
    params.lambda = std::numeric_limits<double>::quiet_NaN();
    params.t = std::numeric_limits<double>::quiet_NaN();
    params.survival = 1.0 - p;
    return params;
}

LindbladRates lindblad_rates(const BathSpec& bath) {
    bath.validate();
    const double n = 1.0 / std::expm1(bath.beta);
    return {n, bath.gamma * (n + 1.0), bath.gamma * n};
}

ChannelDerivatives channel_derivatives(const BathSpec& bath, double t) {
    bath.validate();
    require_time(t);
    if (bath.beta < kMinDerivativeBeta) {
        throw DomainError("beta below " + std::to_string(kMinDerivativeBeta) +
                          ": d lambda / d beta overflows");
    }
    const auto params = channel_params(bath, t);
    const auto pop = thermal_populations(bath.beta);
    const double sh = std::sinh(0.5 * bath.beta);
    ChannelDerivatives d{};
    d.dq = pop.ground * pop.excited;
    d.dlambda = bath.gamma / (2.0 * sh * sh);
    d.dp = -t * std::exp(params.lambda * t) * d.dlambda;
    d.dcoherence = 0.5 * t * std::exp(0.5 * params.lambda * t) * d.dlambda;
    return d;
}

double relaxation_time(const BathSpec& bath) {
    return 1.0 / std::abs(channel_params(bath, 0.0).lambda);
}

std::array<OperatorMatrix, 4> kraus_ops(const ChannelParams& params) {
    const double p = params.p;
    const double q = params.q;
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
        throw DomainError("kraus_ops: p and q must lie in [0, 1]");
    }
    if (std::abs(params.p + params.survival - 1.0) > 1e-12) {
        throw DomainError("kraus_ops: survival must equal 1 - p");
    }
    const double sq = std::sqrt(q);
    const double sq1 = std::sqrt(1.0 - q);
    const double sp = std::sqrt(p);
    const double sp1 = std::sqrt(params.survival);
    std::array<OperatorMatrix, 4> k;
    for (auto& m : k) {
        m = OperatorMatrix::Zero(2, 2);
    }
    k[0](0, 0) = sq;
    k[0](1, 1) = sq * sp1;
    k[1](0, 1) = sq * sp;
    k[2](0, 0) = sq1 * sp1;
    k[2](1, 1) = sq1;
    k[3](1, 0) = sq1 * sp;
    return k;
}

LocalSuperop gad_superop(const BathSpec& bath, double t, PhaseConvention phase) {
    const auto cp = channel_params(bath, t);
    const Complex rot = phase == PhaseConvention::lindblad ? std::polar(1.0, -t) : Complex(1.0);
    if (phase == PhaseConvention::lindblad) {
        // Master-equation solution: populations relax as e^{lambda t} toward pi(beta),
        // coherences as e^{lambda t / 2} with the free phase.
        const auto pop = thermal_populations(bath.beta);
        const double decay = std::exp(cp.lambda * t);
        const double relaxed = -std::expm1(cp.lambda * t);
        const double coh = std::exp(0.5 * cp.lambda * t);
        return block_map(decay + relaxed * pop.ground, relaxed * pop.ground, relaxed * pop.excited,
                         decay + relaxed * pop.excited, coh * rot, coh * std::conj(rot));
    }
    const double p = cp.p;
    const double q = cp.q;
    const double coh = std::sqrt(cp.survival);
    return block_map(cp.survival + p * q, p * q, p * (1.0 - q), cp.survival + p * (1.0 - q), coh, coh);
}

LocalSuperop gad_superop_dbeta(const BathSpec& bath, double t, PhaseConvention phase) {
    const auto cp = channel_params(bath, t);
    const auto d = channel_derivatives(bath, t);
    const double p = cp.p;
    const double q = cp.q;
    const double dpq = d.dp * q + p * d.dq;
    const Complex rot = phase == PhaseConvention::lindblad ? std::polar(1.0, -t) : Complex(1.0);
    return block_map(-d.dp + dpq, dpq, d.dp - dpq, -dpq, d.dcoherence * rot,
                     d.dcoherence * std::conj(rot));
}

DensityMatrix evolve_single_closed(const DensityMatrix& rho1, const ChannelParams& params) {
    require_single_qubit(rho1, "evolve_single_closed");
    const double p = params.p;
    const double q = params.q;
    const double r22 = rho1(1, 1).real();
    const Complex r12 = rho1(0, 1);
    OperatorMatrix out(2, 2);
    const double s = params.survival;
    out(0, 0) = p * q + s * (1.0 - r22);
    out(1, 1) = (1.0 - q) * p + s * r22;
    out(0, 1) = std::sqrt(s) * r12;
    out(1, 0) = std::conj(out(0, 1));
    return DensityMatrix::trusted(std::move(out));
}

DensityMatrix evolve_single_lindblad(const DensityMatrix& rho1, const BathSpec& bath, double t) {
    require_single_qubit(rho1, "evolve_single_lindblad");
    const auto cp = channel_params(bath, t);
    const auto pop = thermal_populations(bath.beta);
    const double e = std::exp(cp.lambda * t);
    const double r22 = rho1(1, 1).real();
    const Complex r12 = rho1(0, 1);
    OperatorMatrix out(2, 2);
    out(0, 0) = (1.0 - e) * pop.ground + e * (1.0 - r22);
    out(1, 1) = (1.0 - e) * pop.excited + e * r22;
    out(0, 1) = std::exp(Complex(0.5 * cp.lambda * t, -t)) * r12;
    out(1, 0) = std::conj(out(0, 1));
    return DensityMatrix::trusted(std::move(out));
}

DensityMatrix evolve_ensemble(const DensityMatrix& rho, const BathSpec& bath, double t,
                              PhaseConvention phase) {
    const LocalSuperop s = gad_superop(bath, t, phase);
    OperatorMatrix m = rho.matrix();
    for (int q = 0; q < rho.n_qubits(); ++q) {
        m = apply_local_superop(m, s, q);
    }
    return DensityMatrix::trusted(std::move(m));
}

EvolvedState evolve_with_derivative(const DensityMatrix& rho, const BathSpec& bath, double t,
                                    PhaseConvention phase) {
    const LocalSuperop s = gad_superop(bath, t, phase);
    const LocalSuperop ds = gad_superop_dbeta(bath, t, phase);
    OperatorMatrix m = rho.matrix();
    OperatorMatrix dm = OperatorMatrix::Zero(m.rows(), m.cols());
    for (int q = 0; q < rho.n_qubits(); ++q) {
        dm = apply_local_superop(dm, s, q) + apply_local_superop(m, ds, q);
        m = apply_local_superop(m, s, q);
    }
    return {DensityMatrix::trusted(std::move(m)), std::move(dm)};
}

OperatorMatrix d_evolve_dbeta(const DensityMatrix& rho_in, const BathSpec& bath, double t,
                              DerivativeMethod method, double fd_step, PhaseConvention phase) {
    if (method == DerivativeMethod::analytic) {
        return evolve_with_derivative(rho_in, bath, t, phase).drho_dbeta;
    }
    bath.validate();
    if (!(fd_step > 0.0) || bath.beta <= fd_step) {
        throw DomainError("finite-difference step must be positive and below beta");
    }
    BathSpec hi = bath;
    BathSpec lo = bath;
    hi.beta += fd_step;
    lo.beta -= fd_step;
    return (evolve_ensemble(rho_in, hi, t, phase).matrix() - evolve_ensemble(rho_in, lo, t, phase).matrix()) /
           (2.0 * fd_step);
}

}  // namespace qthermo
