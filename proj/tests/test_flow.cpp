#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "horoflow/families.hpp"
#include "horoflow/flow.hpp"

using namespace horoflow;

namespace {

// flow speed from symbolic derivatives of rho = base + eps cos(k theta)
double rhs_closed_form(double rho, double rho_t, double rho_tt) {
    const double sh = std::sinh(rho), ch = std::cosh(rho);
    const double v = std::sqrt(sh * sh + rho_t * rho_t);
    const double kappa = (sh * sh * ch + 2.0 * rho_t * rho_t * ch - rho_tt * sh) / (v * v * v);
    return (ch * v / sh - sh) / (kappa - 1.0) - sh;
}

// mode-1 amplitude tuned so the curvature minimum sits at kappa = 1
CurveGrid touching_fixture(int n_nodes) {
    double lo = 0.0, hi = 0.8;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const CurveGrid c = curve_from_modes(n_nodes, 1.0, {{1, mid, 0.0}});
        (hconvexity_margin(derive_fields(c)) > 0.0 ? lo : hi) = mid;
    }
    return curve_from_modes(n_nodes, 1.0, {{1, 0.5 * (lo + hi), 0.0}});
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

FlowState advance(FlowState s, double dt, int steps) {
    for (int i = 0; i < steps; ++i) s = step(s, dt);
    return s;
}

} // namespace

TEST_CASE("circles are stationary") {
    for (double a : {0.5, 1.0, 2.0}) {
        const auto g = flow_rhs(derive_fields(curve_from_modes(64, a, {})));
        for (double x : g) REQUIRE(std::abs(x) <= 1e-13);
    }
}

TEST_CASE("speed is negative at a bumped node") {
    std::vector<double> rho(64, 1.0);
    rho[17] += 1e-4;
    const GeomFields f = derive_fields(make_curve(rho));
    REQUIRE(hconvexity_margin(f) > kStrictMargin);
    const auto g = flow_rhs(f);
    REQUIRE(g[17] < 0.0);
}

TEST_CASE("speed matches the symbolic oracle") {
    const CurveGrid c = curve_from_modes(256, 1.0, {{2, 0.1, 0.0}});
    const auto g = flow_rhs(derive_fields(c));
    for (int j = 0; j < 256; ++j) {
        const double th = kTwoPi * j / 256;
        const double oracle = rhs_closed_form(1.0 + 0.1 * std::cos(2 * th),
                                              -0.2 * std::sin(2 * th), -0.4 * std::cos(2 * th));
        REQUIRE(std::abs(g[j] - oracle) <= 1e-9);
    }
}

TEST_CASE("flow speed rejects curves at the margin floor") {
    const CurveGrid flat = curve_from_modes(256, 1.0, {{2, 0.5, 0.0}});
    REQUIRE_THROWS_AS(flow_rhs(derive_fields(flat)), NotStrictlyHConvexError);
}

TEST_CASE("stable step size") {
    const GeomFields f = derive_fields(curve_from_modes(256, 1.0, {}));
    // diffusion coefficient at the unit circle reduces to 1/(cosh 1 - sinh 1) = e
    const double dtheta = kTwoPi / 256;
    REQUIRE(stable_dt(f, 0.4) ==
            Catch::Approx(0.4 * dtheta * dtheta / std::exp(1.0)).epsilon(1e-12));
    // linear in cfl
    REQUIRE(stable_dt(f, 0.2) == Catch::Approx(0.5 * stable_dt(f, 0.4)).epsilon(1e-15));
    // doubling the grid quarters the step
    const GeomFields f2 = derive_fields(curve_from_modes(512, 1.0, {}));
    REQUIRE(stable_dt(f2, 0.4) == Catch::Approx(0.25 * stable_dt(f, 0.4)).epsilon(1e-12));
}

TEST_CASE("stepping a circle changes only time") {
    FlowState s{0.0, curve_from_modes(256, 1.3, {}), 0};
    const FlowState next = step(s, 1e-4);
    REQUIRE(next.t == 1e-4);
    REQUIRE(next.step_count == 1);
    for (int j = 0; j < 256; ++j) REQUIRE(std::abs(next.curve.rho[j] - 1.3) <= 1e-14);
}

TEST_CASE("one step conserves L - A to machine precision") {
    const CurveGrid c = curve_from_modes(256, 1.0, {{2, 0.1, 0.0}});
    const GeomFields f = derive_fields(c);
    const CurveFunctionals before = functionals(f);
    const FlowState s = step(FlowState{0.0, c, 0}, stable_dt(f, 0.4));
    const CurveFunctionals after = functionals(derive_fields(s.curve));
    REQUIRE(std::abs(after.la - before.la) <= 1e-12 * std::abs(before.la));
}

TEST_CASE("time stepping is fourth order") {
    // energy in a moderately stiff mode so the one-step error is measurable
    const CurveGrid c = curve_from_modes(64, 1.0, {{10, 0.003, 0.0}});
    const double dt = stable_dt(derive_fields(c), 0.4);
    const FlowState s0{0.0, c, 0};
    const std::vector<double> ref = advance(s0, dt / 8, 8).curve.rho;
    const double err_full = sup_diff(advance(s0, dt, 1).curve.rho, ref);
    const double err_half = sup_diff(advance(s0, dt / 2, 2).curve.rho, ref);
    REQUIRE(err_full > 1e-13); // above roundoff so the ratio is meaningful
    REQUIRE(err_full / err_half == Catch::Approx(16.0).epsilon(0.2));
}

TEST_CASE("evolving a circle terminates immediately") {
    FlowOptions opts;
    opts.t_max = 5.0;
    const FlowTrace tr = evolve(curve_from_modes(256, 1.0, {}), opts);
    REQUIRE(tr.termination == Termination::converged_q);
    REQUIRE(tr.final_state.step_count == 0);
    REQUIRE(tr.samples.size() == 1);
}

TEST_CASE("default run: monotone functionals and limit radius") {
    // n = 256: the amplitude-0.1 initial layer needs this resolution for the
    // 1e-6 extremum monitors
    FlowOptions opts;
    opts.t_max = 20.0;
    opts.sample_every = 8;
    const CurveGrid c = curve_from_modes(256, 1.0, {{2, 0.1, 0.0}});
    const FlowTrace tr = evolve(c, opts);
    REQUIRE(tr.termination == Termination::converged_q);

    // conservation and the proven a priori bounds
    REQUIRE(tr.monitors.la_drift_rel <= 1e-6);
    REQUIRE(tr.monitors.kappa_min_drop <= 1e-6);
    REQUIRE(tr.monitors.kappa_max_rise <= 1e-6);
    REQUIRE(tr.monitors.rho_min_drop <= 1e-6);
    REQUIRE(tr.monitors.rho_max_rise <= 1e-6);
    REQUIRE(tr.monitors.m_increase <= 1e-8);
    REQUIRE(tr.monitors.hk_q_negativity <= 1e-8);
    REQUIRE(tr.monitors.dadt_mismatch_rel <= 0.01);
    REQUIRE(tr.monitors.dissipation_mismatch_rel <= 0.01);

    // M strictly decreasing away from convergence
    for (size_t i = 1; i < tr.samples.size(); ++i)
        if (tr.samples[i].sup_dev > 1e-6)
            REQUIRE(tr.samples[i].f.weighted_m < tr.samples[i - 1].f.weighted_m);

    // the limit is the circle predicted by conservation
    double mean = 0.0;
    for (double r : tr.final_state.curve.rho) mean += r;
    mean /= tr.final_state.curve.n_nodes;
    REQUIRE(std::abs(mean - tr.a_infinity_predicted) <= 1e-6);
    const InequalityReport rep = inequality_report(derive_fields(tr.final_state.curve));
    REQUIRE(rep.deficit <= 1e-8);
}

TEST_CASE("sup-driven run reaches the circle to the tolerance") {
    FlowOptions opts;
    opts.t_max = 20.0;
    opts.q_tol = 1e-300; // inert; convergence decided by sup_tol
    opts.sup_tol = 1e-10;
    opts.sample_every = 8;
    const FlowTrace tr = evolve(curve_from_modes(128, 1.0, {{2, 0.05, 0.0}}), opts);
    REQUIRE(tr.termination == Termination::converged_sup);
    double lo = 1e300, hi = -1e300;
    for (double r : tr.final_state.curve.rho) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    REQUIRE(hi - lo <= 1e-8);
}

TEST_CASE("limit radius prediction") {
    // circle of radius 1: L - A = 2 pi (1 - 1/e) inverts back to 1
    REQUIRE(predict_limit_radius(curve_from_modes(64, 1.0, {})) ==
            Catch::Approx(1.0).margin(1e-12));
    // small circles invert to small radii
    REQUIRE(predict_limit_radius(curve_from_modes(64, 1e-3, {})) ==
            Catch::Approx(1e-3).epsilon(1e-9));
    // wildly folded star shape has L - A > 2 pi
    REQUIRE_THROWS_AS(predict_limit_radius(curve_from_modes(256, 2.0, {{6, 1.5, 0.0}})),
                      DomainError);
}

TEST_CASE("end-to-end: flow confirms the predicted limit radius") {
    const CurveGrid c = curve_from_modes(128, 1.0, {{2, 0.05, 0.0}});
    const double a_inf = predict_limit_radius(c);
    FlowOptions opts;
    opts.t_max = 20.0;
    opts.q_tol = 1e-300;
    opts.sup_tol = 1e-10;
    const FlowTrace tr = evolve(c, opts);
    double mean = 0.0;
    for (double r : tr.final_state.curve.rho) mean += r;
    mean /= tr.final_state.curve.n_nodes;
    REQUIRE(std::abs(mean - a_inf) <= 1e-6);
}

TEST_CASE("curve shortening regularization") {
    // tau = 0 is the identity
    const CurveGrid c = curve_from_modes(64, 1.0, {{2, 0.05, 0.0}});
    const CurveGrid same = csf_regularize(c, 0.0, 4);
    REQUIRE(same.rho == c.rho);

    // circles shrink along the radial ODE drho/dt = -coth(rho)
    const CurveGrid circ = csf_regularize(curve_from_modes(64, 1.0, {}), 0.05, 64);
    double r = 1.0;
    const int steps = 20000;
    const double dt = 0.05 / steps;
    auto ode = [](double x) { return -std::cosh(x) / std::sinh(x); };
    for (int i = 0; i < steps; ++i) {
        const double k1 = ode(r), k2 = ode(r + 0.5 * dt * k1), k3 = ode(r + 0.5 * dt * k2),
                     k4 = ode(r + dt * k3);
        r += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    for (double x : circ.rho) REQUIRE(x == Catch::Approx(r).epsilon(1e-8));

    // a curve touching kappa = 1 at one point becomes strictly h-convex
    const CurveGrid fx = touching_fixture(256);
    REQUIRE(std::abs(hconvexity_margin(derive_fields(fx))) <= 1e-8);
    const CurveGrid reg = csf_regularize(fx, 1e-3, 32);
    REQUIRE(hconvexity_margin(derive_fields(reg)) > 0.0);

    // running a tiny circle for too long degenerates it
    REQUIRE_THROWS_AS(csf_regularize(curve_from_modes(64, 0.05, {}), 0.1, 64), DomainError);
}

TEST_CASE("decay rate matches the linearized prediction") {
    for (int k : {1, 2}) {
        FlowOptions opts;
        opts.t_max = 50.0;
        opts.q_tol = 1e-300;
        opts.sup_tol = 1e-10;
        opts.sample_every = 8;
        const FlowTrace tr = evolve(curve_from_modes(128, 1.0, {{k, 0.05, 0.0}}), opts);
        const DecayRateFit fit = fit_decay_rate(tr);
        REQUIRE(fit.mode == k);
        // predicted = k^2 e^{a_inf}; the first nonzero circle eigenvalue is 1
        REQUIRE(fit.predicted ==
                Catch::Approx(k * k * std::exp(tr.a_infinity_predicted)).epsilon(1e-12));
        REQUIRE(std::abs(fit.fitted - fit.predicted) <= 0.15 * fit.predicted);
    }
}

TEST_CASE("rate fit rejects traces without a decade of decay") {
    FlowOptions opts;
    opts.t_max = 5.0;
    const FlowTrace tr = evolve(curve_from_modes(256, 1.0, {}), opts);
    REQUIRE_THROWS_AS(fit_decay_rate(tr), InsufficientDecayError);
}
