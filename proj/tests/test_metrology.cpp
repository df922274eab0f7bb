#include "oracles.hpp"

#include "qthermo/errors.hpp"
#include "qthermo/metrology.hpp"

#include <doctest.h>

#include <numbers>

using namespace qthermo;

namespace {

OperatorMatrix diag2(double a, double b) {
    OperatorMatrix m = OperatorMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("sld of the thermal qubit") {
    const double p0 = oracle::pi0(0.5);
    const double p1 = 1.0 - p0;
    const DensityMatrix th(diag2(p0, p1));
    const OperatorMatrix d = p0 * p1 * diag2(1.0, -1.0);
    const auto r = sld(th, d);
    CHECK(r.qfi == doctest::Approx(p0 * p1).epsilon(1e-14));
    CHECK(r.qfi == doctest::Approx(0.235004).epsilon(1e-6));
    CHECK(r.sld(0, 0).real() == doctest::Approx(p1).epsilon(1e-14));
    CHECK(r.sld(1, 1).real() == doctest::Approx(-p0).epsilon(1e-14));
    CHECK(r.residual <= 1e-15);

    const auto zero = sld(th, OperatorMatrix::Zero(2, 2));
    CHECK(zero.qfi == 0.0);
    CHECK(max_abs(zero.sld) == 0.0);
}

TEST_CASE("sld of the maximally mixed state") {
    std::mt19937_64 rng(31);
    const DensityMatrix mm = maximally_mixed(2);
    OperatorMatrix d = oracle::random_density(2, rng) - oracle::random_density(2, rng);
    d = 0.5 * (d + d.adjoint()).eval();
    const auto r = sld(mm, d);
    CHECK(max_abs(r.sld - 4.0 * d) <= 1e-13);
    CHECK(r.qfi == doctest::Approx(4.0 * d.squaredNorm()).epsilon(1e-13));
}

TEST_CASE("sld input checks") {
    const DensityMatrix th(diag2(0.6, 0.4));
    OperatorMatrix nh = OperatorMatrix::Zero(2, 2);
    nh(0, 1) = 0.1;
    CHECK_THROWS_AS(sld(th, nh), ContractViolation);
    CHECK_THROWS_AS(sld(th, diag2(0.1, 0.1)), ContractViolation);
}

TEST_CASE("qfi agrees with a linear-system Lyapunov solve") {
    std::mt19937_64 rng(32);
    const BathSpec bath{0.7, 1.0};
    for (int n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const DensityMatrix rho(oracle::random_density(n, rng));
            for (double t : {0.05, 0.6}) {
                const auto ev = evolve_with_derivative(rho, bath, t);
                const auto r = sld(ev.rho, ev.drho_dbeta);
                CHECK(r.qfi == doctest::Approx(oracle::qfi_full_rank(ev.rho.matrix(), ev.drho_dbeta)).epsilon(1e-9));
                CHECK(r.residual <= 1e-8);
                const OperatorMatrix lyap = 0.5 * (ev.rho.matrix() * r.sld + r.sld * ev.rho.matrix());
                CHECK(max_abs(lyap - ev.drho_dbeta) <= 1e-8);
            }
        }
    }
}

TEST_CASE("qfi of evolved ensembles") {
    const BathSpec bath{0.5, 1.0};
    StateSpec s;
    s.n_qubits = 2;
    s.eta = 0.4;
    s.chi = 0.5;
    for (auto f : {StateFamily::ghz, StateFamily::identity_mixture, StateFamily::squeezed, StateFamily::ground}) {
        s.family = f;
        CHECK(std::abs(qfi_at(s, bath, 0.0)) <= 1e-12);
        const double t_long = 20.0 * relaxation_time(bath);
        const double dev = std::abs(qfi_at(s, bath, t_long) - 2 * oracle::pi0(0.5) * (1 - oracle::pi0(0.5)));
        // Coherences survive as e^{-10} at this time, so coherent inputs sit further from the asymptote.
        CHECK(dev <= (f == StateFamily::squeezed ? 1e-4 : 1e-6));
    }
    CHECK(thermal_asymptote(bath, 2) == doctest::Approx(0.470008).epsilon(1e-6));

    const double q1 = qfi_of_state(single_qubit_state(0.2, 0.9, 0.4), bath, 0.3);
    for (int n = 2; n <= 4; ++n) {
        const double qn = qfi_of_state(product_state(0.2, 0.9, 0.4, n), bath, 0.3);
        CHECK(std::abs(qn - n * q1) <= 1e-9 * n * q1);
    }
}

TEST_CASE("thermal asymptote") {
    CHECK(thermal_asymptote(BathSpec{0.5, 1.0}, 1) == doctest::Approx(0.235004).epsilon(1e-6));
    CHECK(thermal_asymptote(BathSpec{50.0, 1.0}, 1) == doctest::Approx(std::exp(-50.0)).epsilon(1e-6));
    CHECK(thermal_asymptote(BathSpec{50.0, 1.0}, 1) < 1e-21);
    CHECK(thermal_asymptote(BathSpec{1e-6, 1.0}, 4) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cramer rao") {
    const double q = oracle::pi0(0.5) * (1 - oracle::pi0(0.5));
    CHECK(cramer_rao(q, 1.0) == doctest::Approx(1.0 / std::sqrt(q)).epsilon(1e-14));
    CHECK(cramer_rao(q, 1.0) == doctest::Approx(2.062826).epsilon(1e-6));
    CHECK(cramer_rao(q, 100.0) == doctest::Approx(0.206283).epsilon(1e-5));
    CHECK(std::isinf(cramer_rao(0.0, 1.0)));
    CHECK_THROWS_AS(cramer_rao(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(cramer_rao(1.0, 0.5), DomainError);
}

TEST_CASE("m1 m2 bound") {
    for (double beta : {0.2, 1.0, 3.0}) {
        for (double gamma : {0.5, 2.0}) {
            for (double t : {0.05, 0.5}) {
                const BathSpec bath{beta, gamma};
                const auto b = m1_m2(bath, t);
                CHECK(b.m2_norm <= 1e-12);
                CHECK(b.bound_value(3) - b.bound_value(2) == doctest::Approx(b.bound_value(2) - b.bound_value(1)));
                // Single-qubit channel QFI is bounded by 4 ||M1||; check a few inputs.
                for (double a : {0.0, 0.5, 1.0}) {
                    CHECK(qfi_of_state(single_qubit_state(a, 1.0, 0.0), bath, t) <= b.bound_value(1) + 1e-12);
                }
            }
        }
    }
    CHECK_THROWS_AS(m1_m2(BathSpec{0.5, 1.0}, 0.0), DomainError);
}

TEST_CASE("m1 from finite-difference kraus derivatives") {
    const BathSpec bath{0.8, 1.0};
    const double t = 0.3;
    const double h = 1e-5;
    const auto lo = kraus_ops(channel_params(BathSpec{bath.beta - h, 1.0}, t));
    const auto hi = kraus_ops(channel_params(BathSpec{bath.beta + h, 1.0}, t));
    const auto k = kraus_ops(channel_params(bath, t));
    OperatorMatrix m1 = OperatorMatrix::Zero(2, 2);
    OperatorMatrix m2 = OperatorMatrix::Zero(2, 2);
    for (int i = 0; i < 4; ++i) {
        const OperatorMatrix dk = (hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]) / (2 * h);
        m1 += dk.adjoint() * dk;
        m2 += Complex(0.0, 1.0) * dk.adjoint() * k[static_cast<std::size_t>(i)];
    }
    const auto b = m1_m2(bath, t);
    CHECK(max_abs(b.m1 - m1) <= 1e-7);
    CHECK(max_abs(m2) <= 1e-8);
}

TEST_CASE("time grids") {
    const auto g = uniform_time_grid(2.0, 5);
    CHECK(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 2.0);
    CHECK(g[1] == doctest::Approx(0.5));
    const BathSpec bath{0.5, 1.0};
    CHECK(thermalization_grid(bath).back() == doctest::Approx(20.0 / 4.082988165073597));
    CHECK_THROWS_AS(uniform_time_grid(0.0, 5), DomainError);
}

TEST_CASE("transient peaks") {
    const auto grid = thermalization_grid(BathSpec{0.3, 1.0});
    const auto mm = max_qfi_over_time(maximally_mixed(2), BathSpec{0.3, 1.0}, grid);
    CHECK_FALSE(mm.has_transient_peak);
    CHECK(mm.peak_value <= mm.asymptote);

    const auto im = max_qfi_over_time(identity_mixture(1.0, 2), BathSpec{0.3, 1.0}, grid);
    CHECK(im.has_transient_peak);

    const BathSpec b5{0.5, 1.0};
    const auto gs = max_qfi_over_time(ground_state(2), b5, thermalization_grid(b5));
    CHECK(gs.t_peak > 0.0);
    CHECK(gs.t_peak < 1.0);
    // The refined peak is a local maximum of the continuous curve.
    const double eps = 1e-4;
    CHECK(qfi_of_state(ground_state(2), b5, gs.t_peak + eps) <= gs.peak_value);
    CHECK(qfi_of_state(ground_state(2), b5, gs.t_peak - eps) <= gs.peak_value);
}

TEST_CASE("v quantifiers") {
    const BathSpec bath{0.5, 1.0};
    const auto grid = thermalization_grid(bath, 200);
    StateSpec prod;
    prod.family = StateFamily::product;
    prod.n_qubits = 2;
    prod.a = 0.4;
    prod.r = 0.8;
    const auto vphi = v_quantifier(prod, "phi", 0.0, 2 * std::numbers::pi, bath, grid);
    CHECK(std::abs(vphi.v) <= 1e-9);

    prod.a = 0.0;
    const auto vr = v_quantifier(prod, "r", 0.0, 1.0, bath, grid);
    CHECK(std::abs(vr.v) <= 1e-12);

    StateSpec tm;
    tm.family = StateFamily::thermal_mixture;
    tm.n_qubits = 2;
    tm.mu = 2.0;
    double previous = 2.0;
    for (double beta : {0.1, 0.3, 0.5, 0.8}) {
        const BathSpec b{beta, 1.0};
        const auto v = v_quantifier(tm, "eta", 0.0, 1.0, b, thermalization_grid(b, 200));
        CHECK(v.v < previous);
        previous = v.v;
    }
}
