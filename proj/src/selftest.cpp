#include "qthermo/selftest.hpp"

#include "qthermo/diagnostics.hpp"
#include "qthermo/metrology.hpp"
#include "qthermo/scan.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

namespace qthermo {

namespace {

std::string fmt(const char* label, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s = %.3e", label, v);
    return buf;
}

SelftestCheck check(std::string name, const std::function<std::string(bool&)>& body) {
    SelftestCheck c{std::move(name), false, {}};
    try {
        c.detail = body(c.passed);
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = std::string("threw: ") + e.what();
    }
    return c;
}

}  // namespace

std::vector<SelftestCheck> run_selftest() {
    std::vector<SelftestCheck> out;
    const BathSpec bath{0.5, 1.0};

    out.push_back(check("kraus completeness", [&](bool& ok) {
        double worst = 0.0;
        for (double t : {0.0, 0.1, 1.0, 10.0}) {
            const auto k = kraus_ops(channel_params(bath, t));
            worst = std::max(worst, trace_completeness_residual(k));
        }
        ok = worst <= 1e-12;
        return fmt("residual", worst);
    }));

    out.push_back(check("zero time qfi", [&](bool& ok) {
        const double q = qfi_at(StateSpec{.family = StateFamily::ghz, .n_qubits = 3}, bath, 0.0);
        ok = std::abs(q) <= 1e-12;
        return fmt("qfi", q);
    }));

    out.push_back(check("thermal asymptote", [&](bool& ok) {
        const double t = 20.0 * relaxation_time(bath);
        const double q = qfi_at(StateSpec{.family = StateFamily::ghz, .n_qubits = 2}, bath, t);
        const double err = std::abs(q - thermal_asymptote(bath, 2));
        ok = err <= 1e-6;
        return fmt("deviation", err);
    }));

    out.push_back(check("product additivity", [&](bool& ok) {
        const double t = 0.3;
        const double q1 = qfi_of_state(single_qubit_state(0.3, 0.7, 1.1), bath, t);
        const double q3 = qfi_of_state(product_state(0.3, 0.7, 1.1, 3), bath, t);
        const double rel = std::abs(q3 - 3.0 * q1) / (3.0 * q1);
        ok = rel <= 1e-9;
        return fmt("relative error", rel);
    }));

    out.push_back(check("m2 null", [&](bool& ok) {
        double worst = 0.0;
        for (double beta : {0.2, 1.0, 3.0}) {
            for (double t : {0.05, 0.5, 2.0}) {
                worst = std::max(worst, m1_m2(BathSpec{beta, 1.0}, t).m2_norm);
            }
        }
        ok = worst <= 1e-12;
        return fmt("max ||M2||", worst);
    }));

    out.push_back(check("bound dominates qfi", [&](bool& ok) {
        const double t = 0.2;
        const double q = qfi_at(StateSpec{.family = StateFamily::ground, .n_qubits = 3}, bath, t);
        const double b = m1_m2(bath, t).bound_value(3);
        ok = b >= q;
        return fmt("bound - qfi", b - q);
    }));

    out.push_back(check("sld residual", [&](bool& ok) {
        const auto ev = evolve_with_derivative(identity_mixture(0.8, 2), bath, 0.4);
        const auto r = sld(ev.rho, ev.drho_dbeta);
        ok = r.residual <= 1e-8;
        return fmt("residual", r.residual);
    }));

    out.push_back(check("analytic vs finite difference derivative", [&](bool& ok) {
        const DensityMatrix rho = ghz(2);
        const auto a = d_evolve_dbeta(rho, bath, 0.4, DerivativeMethod::analytic);
        const auto f = d_evolve_dbeta(rho, bath, 0.4, DerivativeMethod::finite_difference);
        const double rel = max_abs(a - f) / max_abs(a);
        ok = rel <= 1e-6;
        return fmt("relative error", rel);
    }));

    out.push_back(check("kraus vs lindblad qfi", [&](bool& ok) {
        const DensityMatrix rho = squeezed(0.7, 0.3, 2);
        double worst = 0.0;
        for (double t : {0.1, 0.5, 1.5}) {
            worst = std::max(worst, std::abs(qfi_of_state(rho, bath, t, PhaseConvention::kraus) -
                                             qfi_of_state(rho, bath, t, PhaseConvention::lindblad)));
        }
        ok = worst <= 1e-9;
        return fmt("max difference", worst);
    }));

    out.push_back(check("squeezed reduction closed form", [&](bool& ok) {
        double worst = 0.0;
        for (int n = 1; n <= 4; ++n) {
            const auto full = squeezed(0.9, 0.4, n);
            const auto reduced = n == 1 ? full : partial_trace(full, {0});
            worst = std::max(worst, max_abs(reduced.matrix() - reduced_squeezed_closed_form(0.9, 0.4, n).matrix()));
        }
        ok = worst <= 1e-12;
        return fmt("max deviation", worst);
    }));

    out.push_back(check("bell state negativity", [&](bool& ok) {
        const double n = negativity(ghz(2), 0);
        ok = std::abs(n - 0.5) <= 1e-12 && negativity(product_state(0.4, 1.0, 0.2, 2), 0) == 0.0;
        return fmt("negativity", n);
    }));

    out.push_back(check("deterministic csv", [&](bool& ok) {
        ScanConfig cfg;
        cfg.betas = {0.5};
        cfg.state.family = StateFamily::identity_mixture;
        cfg.state.n_qubits = 2;
        cfg.sweeps = {{"eta", {0.0, 1.0}}};
        cfg.time_points = 5;
        cfg.columns = {OutputColumn::qfi, OutputColumn::purity};
        std::ostringstream a;
        std::ostringstream b;
        write_csv(run_time_scan(cfg), a);
        write_csv(run_time_scan(cfg, RunOptions{2}), b);
        ok = a.str() == b.str();
        return std::string(ok ? "identical" : "differs");
    }));

    return out;
}

}  // namespace qthermo
