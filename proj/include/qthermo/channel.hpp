#pragma once

// Generalized amplitude damping (GAD) thermalization of each qubit toward the
// bath's thermal state, and the beta-derivative of the evolved ensemble.

#include "qthermo/opalg.hpp"

#include <array>

namespace qthermo {

// Bath inverse temperature (k_B = 1) and single-thermometer relaxation rate.
struct BathSpec {
    double beta = 1.0;
    double gamma = 1.0;

    // Throws DomainError unless beta > 0 and gamma > 0 (both finite).
    void validate() const;
};

// Channel at one instant: p = 1 - e^{lambda t}, q = pi_0(beta), lambda = -gamma coth(beta/2).
struct ChannelParams {
    double p = 0.0;
    double q = 0.5;
    double lambda = -1.0;
    double t = 0.0;
    // 1 - p = e^{lambda t}, kept separately so it retains full relative precision as p -> 1.
    double survival = 1.0;

    // Bare (p, q) pair with no bath behind it; lambda and t are left as NaN.
    static ChannelParams from_pq(double p, double q);
};

// Jump rates of the equivalent master equation.
struct LindbladRates {
    double occupation;  // Bose factor n = 1 / (e^beta - 1)
    double decay;       // |1> -> |0>, gamma (n + 1)
    double excitation;  // |0> -> |1>, gamma n
};

// Analytic beta-derivatives of the channel coefficients at (bath, t).
struct ChannelDerivatives {
    double dq;             // d pi_0 / d beta = pi_0 pi_1
    double dlambda;        // gamma / (2 sinh^2(beta/2))
    double dp;             // -t e^{lambda t} dlambda
    double dcoherence;     // d sqrt(1-p) / d beta = (t/2) e^{lambda t / 2} dlambda
};

// Whether coherences pick up the free-evolution phase e^{-it} of the master equation.
enum class PhaseConvention { kraus, lindblad };

enum class DerivativeMethod { analytic, finite_difference };

inline constexpr double kMinDerivativeBeta = 1e-6;
inline constexpr double kDefaultFdStep = 1e-6;

ChannelParams channel_params(const BathSpec& bath, double t);
LindbladRates lindblad_rates(const BathSpec& bath);
ChannelDerivatives channel_derivatives(const BathSpec& bath, double t);

// 1/|lambda|: e-folding time of the populations.
double relaxation_time(const BathSpec& bath);

std::array<OperatorMatrix, 4> kraus_ops(const ChannelParams& params);

// Block maps of the single-qubit channel and of its beta-derivative.
LocalSuperop gad_superop(const BathSpec& bath, double t, PhaseConvention phase);
LocalSuperop gad_superop_dbeta(const BathSpec& bath, double t, PhaseConvention phase);

DensityMatrix evolve_single_closed(const DensityMatrix& rho1, const ChannelParams& params);
DensityMatrix evolve_single_lindblad(const DensityMatrix& rho1, const BathSpec& bath, double t);

DensityMatrix evolve_ensemble(const DensityMatrix& rho, const BathSpec& bath, double t,
                              PhaseConvention phase = PhaseConvention::kraus);

struct EvolvedState {
    DensityMatrix rho;
    OperatorMatrix drho_dbeta;
};

// Evolved state together with its analytic beta-derivative (product rule over qubits).
EvolvedState evolve_with_derivative(const DensityMatrix& rho, const BathSpec& bath, double t,
                                    PhaseConvention phase = PhaseConvention::kraus);

OperatorMatrix d_evolve_dbeta(const DensityMatrix& rho_in, const BathSpec& bath, double t,
                              DerivativeMethod method = DerivativeMethod::analytic,
                              double fd_step = kDefaultFdStep,
                              PhaseConvention phase = PhaseConvention::kraus);

}  // namespace qthermo
