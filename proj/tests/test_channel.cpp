#include "oracles.hpp"

#include "qthermo/channel.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/states.hpp"

#include <doctest.h>

using namespace qthermo;

namespace {

// coth(x) from exponentials, independent of the library's tanh-based form.
double coth(double x) { return (std::exp(2 * x) + 1.0) / (std::exp(2 * x) - 1.0); }

DensityMatrix plus_state() { return single_qubit_state(0.5, 1.0, 0.0); }

}  // namespace

TEST_CASE("channel parameters") {
    const BathSpec bath{0.5, 1.0};
    auto cp = channel_params(bath, 0.0);
    CHECK(cp.p == 0.0);
    CHECK(cp.q == doctest::Approx(oracle::pi0(0.5)).epsilon(1e-15));
    CHECK(cp.lambda == doctest::Approx(-coth(0.25)).epsilon(1e-14));
    CHECK(cp.lambda == doctest::Approx(-4.082988).epsilon(1e-6));

    cp = channel_params(bath, 0.1);
    CHECK(cp.p == doctest::Approx(1.0 - std::exp(-0.1 * coth(0.25))).epsilon(1e-14));
    CHECK(cp.p == doctest::Approx(0.335220).epsilon(1e-6));

    CHECK(std::abs(channel_params(bath, 100.0).p - 1.0) <= 1e-12);

    // lambda = gamma / (pi_1 - pi_0)
    for (double beta : {0.1, 1.0, 4.0}) {
        const double p0 = oracle::pi0(beta);
        CHECK(channel_params(BathSpec{beta, 2.0}, 0.0).lambda == doctest::Approx(2.0 / (1.0 - 2.0 * p0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(channel_params(BathSpec{0.0, 1.0}, 0.1), DomainError);
    CHECK_THROWS_AS(channel_params(BathSpec{1.0, -1.0}, 0.1), DomainError);
    CHECK_THROWS_AS(channel_params(bath, -0.1), DomainError);
}

TEST_CASE("lindblad rates reproduce the relaxation rate") {
    for (double beta : {0.2, 1.0, 3.0}) {
        const auto r = lindblad_rates(BathSpec{beta, 1.5});
        CHECK(r.decay - r.excitation == doctest::Approx(1.5));
        CHECK(r.decay / r.excitation == doctest::Approx(std::exp(beta)));
        CHECK(-(r.decay + r.excitation) == doctest::Approx(channel_params(BathSpec{beta, 1.5}, 0.0).lambda));
    }
}

TEST_CASE("kraus operators") {
    for (double p : {0.0, 0.2, 0.7, 1.0}) {
        for (double q : {0.0, 0.4, 0.62, 1.0}) {
            const auto k = kraus_ops(ChannelParams::from_pq(p, q));
            CHECK(trace_completeness_residual(k) <= 1e-14);
        }
    }
    const auto id = kraus_ops(ChannelParams::from_pq(0.0, 0.6));
    std::mt19937_64 rng(21);
    const DensityMatrix rho(oracle::random_density(1, rng));
    CHECK(max_abs(apply_local_kraus(rho, id, 0).matrix() - rho.matrix()) <= 1e-15);
}

TEST_CASE("single-qubit closed form") {
    const double q = oracle::pi0(0.5);
    for (double p : {0.0, 0.3, 0.9}) {
        const DensityMatrix fixed(thermal_qubit(0.5));
        CHECK(max_abs(evolve_single_closed(fixed, ChannelParams::from_pq(p, q)).matrix() - fixed.matrix()) <= 1e-15);
    }
    const double p = 1.0 - std::exp(-0.1 * coth(0.25));
    const auto out = evolve_single_closed(plus_state(), ChannelParams::from_pq(p, q));
    CHECK(std::abs(out(0, 1)) == doctest::Approx(0.5 * std::sqrt(1.0 - p)).epsilon(1e-14));
    CHECK(std::abs(out(0, 1)) == doctest::Approx(0.407670).epsilon(1e-6));

    std::mt19937_64 rng(22);
    const DensityMatrix rnd(oracle::random_density(1, rng));
    const auto full = evolve_single_closed(rnd, ChannelParams::from_pq(1.0, q));
    CHECK(max_abs(full.matrix() - thermal_qubit(0.5).matrix()) <= 1e-15);
}

TEST_CASE("lindblad solution against an RK4 integration of the master equation") {
    std::mt19937_64 rng(23);
    for (double beta : {0.3, 1.0, 2.5}) {
        for (double gamma : {0.5, 1.0}) {
            const BathSpec bath{beta, gamma};
            const DensityMatrix rho(oracle::random_density(1, rng));
            for (double t : {0.05, 0.4, 1.3}) {
                const OperatorMatrix ode = oracle::rk4_lindblad(rho.matrix(), beta, gamma, t, 4000);
                const auto lib = evolve_single_lindblad(rho, bath, t);
                CHECK(std::abs(ode(0, 0) - lib(0, 0)) <= 1e-11);
                CHECK(std::abs(ode(1, 1) - lib(1, 1)) <= 1e-11);
                CHECK(std::abs(std::abs(ode(0, 1)) - std::abs(lib(0, 1))) <= 1e-11);
                // The integrated Hamiltonian -sigma_z/2 rotates rho_01 as e^{+it}; the
                // library uses the opposite orientation of the free phase.
                CHECK(std::abs(ode(0, 1) - std::conj(lib(0, 1) / rho(0, 1)) * rho(0, 1)) <= 1e-11);
            }
        }
    }
}

TEST_CASE("ground-state evolution") {
    const BathSpec bath{0.5, 1.0};
    const auto out = evolve_single_lindblad(ground_state(1), bath, 0.1);
    const double e = std::exp(-0.1 * coth(0.25));
    CHECK(out(0, 0).real() == doctest::Approx((1.0 - e) * oracle::pi0(0.5) + e).epsilon(1e-14));
    CHECK(out(0, 0).real() == doctest::Approx(0.873441).epsilon(1e-6));
    const auto plus = evolve_single_lindblad(plus_state(), bath, 0.1);
    CHECK(std::abs(plus(0, 1)) == doctest::Approx(0.5 * std::exp(-0.05 * coth(0.25))).epsilon(1e-14));
}

TEST_CASE("kraus and lindblad agree up to the coherent phase") {
    std::mt19937_64 rng(24);
    for (double beta : {0.2, 0.8, 2.0}) {
        for (double gamma : {0.3, 1.0, 2.0}) {
            const BathSpec bath{beta, gamma};
            for (double t : {0.0, 0.2, 1.0, 5.0}) {
                const DensityMatrix rho(oracle::random_density(1, rng));
                const auto k = evolve_single_closed(rho, channel_params(bath, t));
                const auto l = evolve_single_lindblad(rho, bath, t);
                CHECK(std::abs(k(0, 0) - l(0, 0)) <= 1e-12);
                CHECK(std::abs(k(1, 1) - l(1, 1)) <= 1e-12);
                CHECK(std::abs(k(0, 1) * std::polar(1.0, -t) - l(0, 1)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("ensemble evolution") {
    const BathSpec bath{0.5, 1.0};
    std::mt19937_64 rng(25);
    const DensityMatrix rho(oracle::random_density(3, rng));
    const auto k = kraus_ops(channel_params(bath, 0.3));
    CHECK(max_abs(evolve_ensemble(rho, bath, 0.3).matrix() - oracle::kraus_sum(rho.matrix(), k, 3)) <= 1e-12);
    CHECK(max_abs(evolve_ensemble(rho, bath, 0.0).matrix() - rho.matrix()) == 0.0);

    const double t_long = 20.0 / std::abs(channel_params(bath, 0.0).lambda);
    const OperatorMatrix th = thermal_qubit(0.5).matrix();
    const OperatorMatrix th2 = oracle::kron(th, th);
    StateSpec s;
    s.n_qubits = 2;
    s.eta = 0.7;
    s.mu = 1.2;
    s.alpha = 0.8;
    s.k = PauliEigenstate::right;
    s.chi = 0.9;
    s.a = 0.3;
    s.r = 0.6;
    for (auto f : {StateFamily::product, StateFamily::ghz, StateFamily::identity_mixture, StateFamily::thermal_mixture,
                   StateFamily::k_superposition, StateFamily::squeezed, StateFamily::maximally_mixed,
                   StateFamily::ground}) {
        s.family = f;
        const OperatorMatrix rho0 = build_state(s).matrix();
        const OperatorMatrix out = evolve_ensemble(build_state(s), bath, t_long).matrix();
        // Populations relax as e^{lambda t} = e^{-20}; single-qubit coherences only as e^{-10}.
        const double pop_decay = std::exp(-20.0);
        const double coh_decay = std::exp(-10.0);
        for (Eigen::Index i = 0; i < 4; ++i) {
            for (Eigen::Index j = 0; j < 4; ++j) {
                const int flips = oracle::bit(static_cast<int>(i ^ j), 0, 2) + oracle::bit(static_cast<int>(i ^ j), 1, 2);
                const double bound = flips == 0 ? 4 * pop_decay : std::pow(coh_decay, flips) * (1.0 + 1e-9);
                CHECK(std::abs(out(i, j) - th2(i, j)) <= bound * std::max(1.0, 2 * max_abs(rho0)));
            }
        }
        CHECK(max_abs(out - oracle::kraus_sum(rho0, kraus_ops(channel_params(bath, t_long)), 2)) <= 1e-14);
    }

    // GHZ corner coherence picks up sqrt(1-p) once per qubit.
    const double p = channel_params(bath, 0.25).p;
    CHECK(evolve_ensemble(ghz(2), bath, 0.25)(0, 3).real() == doctest::Approx(0.5 * (1.0 - p)).epsilon(1e-14));
}

TEST_CASE("channel derivatives") {
    const double h = 1e-5;
    for (double beta : {0.3, 1.0, 2.0}) {
        for (double t : {0.1, 0.7}) {
            const auto d = channel_derivatives(BathSpec{beta, 1.3}, t);
            auto at = [&](double b) { return channel_params(BathSpec{b, 1.3}, t); };
            const auto lo = at(beta - h);
            const auto hi = at(beta + h);
            CHECK(d.dq == doctest::Approx((hi.q - lo.q) / (2 * h)).epsilon(1e-8));
            CHECK(d.dlambda == doctest::Approx((hi.lambda - lo.lambda) / (2 * h)).epsilon(1e-8));
            CHECK(d.dp == doctest::Approx((hi.p - lo.p) / (2 * h)).epsilon(1e-8));
            CHECK(d.dcoherence ==
                  doctest::Approx((std::sqrt(1 - hi.p) - std::sqrt(1 - lo.p)) / (2 * h)).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(channel_derivatives(BathSpec{1e-8, 1.0}, 0.1), DomainError);
}

TEST_CASE("ensemble derivative") {
    const BathSpec bath{0.5, 1.0};
    CHECK(max_abs(d_evolve_dbeta(ghz(3), bath, 0.0)) == 0.0);

    // Long-time single-qubit limit: d rho_th / d beta = pi_0 pi_1 diag(1, -1).
    const auto d = d_evolve_dbeta(plus_state(), bath, 60.0);
    const double p0 = oracle::pi0(0.5);
    CHECK(d(0, 0).real() == doctest::Approx(p0 * (1 - p0)).epsilon(1e-12));
    CHECK(d(1, 1).real() == doctest::Approx(-p0 * (1 - p0)).epsilon(1e-12));
    CHECK(p0 * (1 - p0) == doctest::Approx(0.235004).epsilon(1e-6));

    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho(oracle::random_density(2, rng));
        for (double t : {0.05, 0.5, 2.0}) {
            const auto a = d_evolve_dbeta(rho, bath, t, DerivativeMethod::analytic);
            const auto f = d_evolve_dbeta(rho, bath, t, DerivativeMethod::finite_difference, 1e-6);
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                for (Eigen::Index j = 0; j < a.cols(); ++j) {
                    CHECK(std::abs(a(i, j) - f(i, j)) <= 1e-6 * std::max(std::abs(a(i, j)), max_abs(a)));
                }
            }
        }
    }
    const auto ev = evolve_with_derivative(ghz(2), bath, 0.4);
    CHECK(max_abs(ev.rho.matrix() - evolve_ensemble(ghz(2), bath, 0.4).matrix()) <= 1e-15);
    CHECK(max_abs(ev.drho_dbeta - d_evolve_dbeta(ghz(2), bath, 0.4)) <= 1e-15);
    CHECK(std::abs(ev.drho_dbeta.trace()) <= 1e-14);
    CHECK_THROWS_AS(d_evolve_dbeta(ghz(2), BathSpec{1e-7, 1.0}, 0.4, DerivativeMethod::finite_difference),
                    DomainError);
}
