#pragma once

// Time integration of the locally constrained curvature flow for strictly
// h-convex curves, written as the scalar initial value problem
//
//   d rho / dt = (phi'(rho) v / phi(rho) - phi(rho)) / (kappa - 1) - phi(rho)
//
// on the periodic grid. Classical RK4 in time with an adaptive step from the
// closed-form diffusion coefficient of the quasilinear operator; the stage
// right-hand sides are projected onto modes <= n/3 (standard 2/3 dealiasing),
// which keeps the explicit scheme inside its stability region at the default
// CFL number. Along the run every proven a priori bound is monitored:
// conservation of L - A, curvature and radial maximum principles,
// nonnegativity of the Heintze-Karcher functional, monotonicity of the
// weighted functional M with its dissipation identity, and A'(t) = Q(t).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "horoflow/curve.hpp"
#include "horoflow/errors.hpp"
#include "horoflow/spectral.hpp"

namespace horoflow {

struct FlowOptions {
    double cfl = 0.4;
    double t_max = 10.0;
    double q_tol = 1e-10;   // converged once Q < q_tol * L
    double sup_tol = 1e-10; // converged once sup |rho - a_inf| < sup_tol
    int sample_every = 16;  // steps between recorded samples
    std::optional<int> snapshot_every; // snapshots every k-th sample, if set
    double margin_floor = 1e-6;

    void validate() const {
        if (!(cfl > 0.0 && cfl < 1.0)) throw DomainError("FlowOptions: cfl must be in (0,1)");
        if (!(t_max > 0.0)) throw DomainError("FlowOptions: t_max must be positive");
        if (!(q_tol > 0.0) || !(sup_tol > 0.0)) throw DomainError("FlowOptions: tolerances must be positive");
        if (sample_every < 1) throw DomainError("FlowOptions: sample_every must be >= 1");
        if (snapshot_every && *snapshot_every < 1) throw DomainError("FlowOptions: snapshot_every must be >= 1");
        if (!(margin_floor > 0.0)) throw DomainError("FlowOptions: margin_floor must be positive");
    }
};

struct FlowState {
    double t = 0.0;
    CurveGrid curve;
    long step_count = 0;
};

struct FlowSample {
    double t = 0.0;
    CurveFunctionals f;
    double sup_dev = 0.0;     // sup |rho - a_inf_predicted|
    double dissipation = 0.0; // 2 integral (kappa-1) (dPhi/ds)^2 ds
};

enum class Termination { converged_q, converged_sup, t_max_reached, aborted_margin };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged_q: return "converged_Q";
        case Termination::converged_sup: return "converged_sup";
        case Termination::t_max_reached: return "t_max_reached";
        case Termination::aborted_margin: return "aborted_margin";
    }
    return "unknown";
}

// Monitor thresholds; a violation beyond 10x any of these aborts the run.
inline constexpr double kBoundDriftTol = 1e-6;   // kappa and rho extrema
inline constexpr double kMonotoneTol = 1e-8;     // M non-increase, Q >= -tol*L
inline constexpr double kIdentityRelTol = 0.01;  // dA/dt = Q and dM/dt dissipation

struct MonitorSummary {
    double kappa_min_drop = 0.0;  // max(kappa_min(0) - kappa_min(t), 0)
    double kappa_max_rise = 0.0;
    double rho_min_drop = 0.0;
    double rho_max_rise = 0.0;
    double m_increase = 0.0;      // max sample-to-sample increase of M
    double hk_q_negativity = 0.0; // max(-Q/L, 0)
    double la_drift_rel = 0.0;
    double dadt_mismatch_rel = 0.0;
    double dissipation_mismatch_rel = 0.0;
};

struct FlowTrace {
    std::vector<FlowSample> samples;
    std::vector<std::pair<double, CurveGrid>> snapshots;
    double a_infinity_predicted = 0.0;
    int dominant_mode = 1;
    Termination termination = Termination::t_max_reached;
    std::string abort_reason;
    MonitorSummary monitors;
    FlowState final_state;
    FlowOptions options;
};

namespace detail {

inline std::vector<double> flow_rhs_core(const GeomFields& f) {
    const int n = f.n_nodes;
    std::vector<double> g(n);
    for (int j = 0; j < n; ++j)
        g[j] = (f.phi_p[j] * f.v[j] / f.phi[j] - f.phi[j]) / (f.kappa[j] - 1.0) - f.phi[j];
    return g;
}

inline int dealias_cutoff(int n) { return n / 3; }

} // namespace detail

/// d rho / dt per node. Requires curvature margin above the floor, or the
/// 1/(kappa-1) factor is considered near-singular.
inline std::vector<double> flow_rhs(const GeomFields& f, double margin_floor = kStrictMargin) {
    if (!(hconvexity_margin(f) > margin_floor))
        throw NotStrictlyHConvexError("flow_rhs: curvature margin at or below floor");
    return detail::flow_rhs_core(f);
}

/// Largest stable explicit step, cfl * dtheta^2 / max_j D_j, where
/// D = dG/d(rho_theta_theta) = (phi' v / phi - phi) phi / ((kappa-1)^2 v^3)
/// is the pointwise diffusion coefficient of the flow operator.
inline double stable_dt(const GeomFields& f, double cfl) {
    if (!(hconvexity_margin(f) > 0.0))
        throw NotStrictlyHConvexError("stable_dt: curve not strictly h-convex");
    double dmax = 0.0;
    for (int j = 0; j < f.n_nodes; ++j) {
        const double km1 = f.kappa[j] - 1.0;
        const double d = (f.phi_p[j] * f.v[j] / f.phi[j] - f.phi[j]) * f.phi[j] /
                         (km1 * km1 * f.v[j] * f.v[j] * f.v[j]);
        dmax = std::max(dmax, d);
    }
    const double dt = f.dtheta();
    return cfl * dt * dt / dmax;
}

namespace detail {

/// Stage right-hand side for the method-of-lines system: margin-checked flow
/// speed projected onto the dealiased band.
inline std::vector<double> flow_stage_rhs(const std::vector<double>& rho, int n, double margin_floor) {
    GeomFields f = derive_fields(CurveGrid{n, rho});
    if (!(hconvexity_margin(f) > margin_floor))
        throw AbortedMarginError("flow step: curvature margin hit the floor mid-stage");
    std::vector<double> g = flow_rhs_core(f);
    periodic_engine(n).lowpass(g, dealias_cutoff(n));
    return g;
}

template <typename Rhs>
std::vector<double> rk4_advance(const std::vector<double>& rho, double dt, Rhs&& rhs) {
    const size_t n = rho.size();
    const std::vector<double> k1 = rhs(rho);
    std::vector<double> tmp(n);
    for (size_t j = 0; j < n; ++j) tmp[j] = rho[j] + 0.5 * dt * k1[j];
    const std::vector<double> k2 = rhs(tmp);
    for (size_t j = 0; j < n; ++j) tmp[j] = rho[j] + 0.5 * dt * k2[j];
    const std::vector<double> k3 = rhs(tmp);
    for (size_t j = 0; j < n; ++j) tmp[j] = rho[j] + dt * k3[j];
    const std::vector<double> k4 = rhs(tmp);
    std::vector<double> out(n);
    for (size_t j = 0; j < n; ++j)
        out[j] = rho[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return out;
}

} // namespace detail

/// One RK4 step of the semi-discrete system. The caller is responsible for
/// dt <= stable_dt of the current state.
inline FlowState step(const FlowState& state, double dt, double margin_floor = kStrictMargin) {
    const int n = state.curve.n_nodes;
    std::vector<double> rho = detail::rk4_advance(
        state.curve.rho, dt,
        [&](const std::vector<double>& r) { return detail::flow_stage_rhs(r, n, margin_floor); });
    return {state.t + dt, CurveGrid{n, std::move(rho)}, state.step_count + 1};
}

/// Radius of the limiting circle from conservation of L - A:
/// a_inf = -ln(1 - (L - A) / (2 pi)).
inline double predict_limit_radius(const CurveGrid& curve) {
    const CurveFunctionals f = functionals(derive_fields(curve));
    if (!(f.la > 0.0 && f.la < kTwoPi))
        throw DomainError("predict_limit_radius: L - A outside (0, 2 pi)");
    return -std::log1p(-f.la / kTwoPi);
}

inline FlowTrace evolve(const CurveGrid& curve0, const FlowOptions& opts = {}) {
    opts.validate();
    curve0.validate();
    const int n = curve0.n_nodes;
    PeriodicSpectral& eng = periodic_engine(n);

    FlowState state{0.0, curve0, 0};
    eng.lowpass(state.curve.rho, detail::dealias_cutoff(n)); // drop unresolvable tail once

    GeomFields f0 = derive_fields(state.curve);
    if (!(hconvexity_margin(f0) > opts.margin_floor))
        throw NotStrictlyHConvexError("evolve: initial margin not above the floor");

    FlowTrace trace;
    trace.options = opts;
    trace.a_infinity_predicted = predict_limit_radius(state.curve);
    {
        double mean = 0.0;
        for (double r : state.curve.rho) mean += r;
        mean /= n;
        std::vector<double> centered(state.curve.rho);
        for (double& r : centered) r -= mean;
        trace.dominant_mode = eng.dominant_mode(centered);
    }

    const CurveFunctionals base = functionals(f0);
    const double la0 = base.la;
    bool done = false;

    auto record_sample = [&](const FlowState& s) {
        const GeomFields f = derive_fields(s.curve);
        FlowSample smp;
        smp.t = s.t;
        smp.f = functionals(f);
        double dev = 0.0, diss = 0.0;
        for (int j = 0; j < n; ++j) {
            dev = std::max(dev, std::abs(f.rho[j] - trace.a_infinity_predicted));
            diss += (f.kappa[j] - 1.0) * f.phi[j] * f.phi[j] * f.rho_t1[j] * f.rho_t1[j] / f.v[j];
        }
        smp.sup_dev = dev;
        smp.dissipation = 2.0 * diss * kTwoPi / n;
        trace.samples.push_back(smp);
        const size_t i = trace.samples.size() - 1;

        if (opts.snapshot_every && i % static_cast<size_t>(*opts.snapshot_every) == 0)
            trace.snapshots.emplace_back(s.t, s.curve);

        MonitorSummary& mon = trace.monitors;
        mon.kappa_min_drop = std::max(mon.kappa_min_drop, base.kappa_min - smp.f.kappa_min);
        mon.kappa_max_rise = std::max(mon.kappa_max_rise, smp.f.kappa_max - base.kappa_max);
        mon.rho_min_drop = std::max(mon.rho_min_drop, base.rho_min - smp.f.rho_min);
        mon.rho_max_rise = std::max(mon.rho_max_rise, smp.f.rho_max - base.rho_max);
        mon.la_drift_rel = std::max(mon.la_drift_rel, std::abs(smp.f.la - la0) / std::abs(la0));
        if (smp.f.hk_q)
            mon.hk_q_negativity = std::max(mon.hk_q_negativity, -(*smp.f.hk_q) / smp.f.length);
        if (i >= 1)
            mon.m_increase = std::max(mon.m_increase,
                                      smp.f.weighted_m - trace.samples[i - 1].f.weighted_m);
        if (i >= 2) {
            // Centered-difference identities at the previous sample. "Mid-run"
            // means the stencil resolves the quantity: the initial stiff
            // transient changes Q and the dissipation by orders of magnitude
            // between samples, where a finite difference says nothing.
            const FlowSample& a = trace.samples[i - 2];
            const FlowSample& b = trace.samples[i - 1];
            const FlowSample& c = trace.samples[i];
            const double h = c.t - a.t;
            if (h > 0.0) {
                const double dadt = (c.f.area - a.f.area) / h;
                const double q = b.f.hk_q.value_or(0.0);
                const bool q_resolved =
                    std::abs(c.f.hk_q.value_or(0.0) - a.f.hk_q.value_or(0.0)) <= 0.2 * std::abs(q);
                if (q_resolved && std::abs(q) > 1e-6 * std::max(1.0, b.f.length))
                    mon.dadt_mismatch_rel = std::max(mon.dadt_mismatch_rel, std::abs(dadt - q) / std::abs(q));
                const double dmdt = (c.f.weighted_m - a.f.weighted_m) / h;
                const bool d_resolved =
                    std::abs(c.dissipation - a.dissipation) <= 0.2 * b.dissipation;
                if (d_resolved && std::abs(dmdt) > 1e-6)
                    mon.dissipation_mismatch_rel =
                        std::max(mon.dissipation_mismatch_rel, std::abs(dmdt + b.dissipation) / std::abs(dmdt));
            }
        }

        auto blown = [](double value, double tol) { return value > 10.0 * tol; };
        if (blown(mon.kappa_min_drop, kBoundDriftTol) || blown(mon.kappa_max_rise, kBoundDriftTol) ||
            blown(mon.rho_min_drop, kBoundDriftTol) || blown(mon.rho_max_rise, kBoundDriftTol) ||
            blown(mon.m_increase, kMonotoneTol) || blown(mon.hk_q_negativity, kMonotoneTol) ||
            blown(mon.dadt_mismatch_rel, kIdentityRelTol) ||
            blown(mon.dissipation_mismatch_rel, kIdentityRelTol)) {
            trace.termination = Termination::aborted_margin;
            trace.abort_reason = "monitored invariant violated beyond 10x its tolerance";
            done = true;
            return;
        }

        if (smp.f.hk_q && std::abs(*smp.f.hk_q) < opts.q_tol * smp.f.length) {
            trace.termination = Termination::converged_q;
            done = true;
        } else if (smp.sup_dev < opts.sup_tol) {
            trace.termination = Termination::converged_sup;
            done = true;
        } else if (s.t >= opts.t_max * (1.0 - 1e-15)) {
            trace.termination = Termination::t_max_reached;
            done = true;
        }
    };

    record_sample(state);
    while (!done) {
        int taken = 0;
        bool hit_tmax = false;
        try {
            while (taken < opts.sample_every) {
                double dt = stable_dt(derive_fields(state.curve), opts.cfl);
                if (state.t + dt >= opts.t_max) {
                    dt = opts.t_max - state.t;
                    hit_tmax = true;
                }
                if (dt > 0.0) state = step(state, dt, opts.margin_floor);
                ++taken;
                if (hit_tmax) break;
            }
        } catch (const AbortedMarginError& e) {
            trace.termination = Termination::aborted_margin;
            trace.abort_reason = e.what();
            done = true;
        }
        if (!done) record_sample(state);
    }
    trace.final_state = state;
    return trace;
}

/// Curve shortening flow d rho / dt = -kappa v / phi for total time tau in
/// n_steps RK4 substeps. A short burst of this flow turns an h-convex curve
/// with isolated kappa = 1 points into a strictly h-convex one.
inline CurveGrid csf_regularize(const CurveGrid& curve, double tau, int n_steps) {
    curve.validate();
    if (n_steps < 1) throw DomainError("csf_regularize: n_steps must be >= 1");
    if (tau < 0.0) throw DomainError("csf_regularize: tau must be >= 0");
    const int n = curve.n_nodes;
    GeomFields f0 = derive_fields(curve);
    if (hconvexity_margin(f0) < -kDefaultTolQuad)
        throw NotHConvexError("csf_regularize: curve is not h-convex");
    if (!(f0.kappa_max() > 1.0))
        throw NotHConvexError("csf_regularize: no node with kappa > 1");
    if (tau == 0.0) return curve;

    auto rhs = [&](const std::vector<double>& rho) {
        GeomFields f = derive_fields(CurveGrid{n, rho});
        double rho_min = *std::min_element(rho.begin(), rho.end());
        if (rho_min < 0.01)
            throw DomainError("csf_regularize: curve degenerated (rho_min < 0.01)");
        std::vector<double> g(n);
        for (int j = 0; j < n; ++j) g[j] = -f.kappa[j] * f.v[j] / f.phi[j];
        periodic_engine(n).lowpass(g, detail::dealias_cutoff(n));
        return g;
    };

    std::vector<double> rho = curve.rho;
    const double dt = tau / n_steps;
    for (int i = 0; i < n_steps; ++i) rho = detail::rk4_advance(rho, dt, rhs);
    CurveGrid out{n, std::move(rho)};
    out.validate();
    return out;
}

struct DecayRateFit {
    double fitted = 0.0;    // -slope of ln sup_dev over the fit window
    double predicted = 0.0; // k^2 e^{a_inf} from the linearized flow
    int mode = 1;
};

/// Exponential rate of sup |rho - a_inf| from a converged trace. The window
/// discards the nonlinear transient (first factor-10 drop) and the
/// convergence-tolerance noise floor (below 10 * sup_tol).
inline DecayRateFit fit_decay_rate(const FlowTrace& trace) {
    if (trace.samples.size() < 3) throw InsufficientDecayError("fit_decay_rate: too few samples");
    const double hi = 0.1 * trace.samples.front().sup_dev;
    const double lo = 10.0 * trace.options.sup_tol;
    std::vector<std::pair<double, double>> pts; // (t, ln sup_dev)
    for (const FlowSample& s : trace.samples)
        if (s.sup_dev >= lo && s.sup_dev <= hi) pts.emplace_back(s.t, std::log(s.sup_dev));
    if (pts.size() < 3) throw InsufficientDecayError("fit_decay_rate: fit window is empty");
    double wmax = -1e300, wmin = 1e300;
    for (auto& [t, w] : pts) {
        wmax = std::max(wmax, w);
        wmin = std::min(wmin, w);
    }
    if (wmax - wmin < std::log(10.0))
        throw InsufficientDecayError("fit_decay_rate: less than one decade of decay in window");
    double st = 0, sw = 0, stt = 0, stw = 0;
    for (auto& [t, w] : pts) {
        st += t;
        sw += w;
        stt += t * t;
        stw += t * w;
    }
    const double m = static_cast<double>(pts.size());
    const double slope = (m * stw - st * sw) / (m * stt - st * st);
    DecayRateFit fit;
    fit.mode = trace.dominant_mode;
    fit.fitted = -slope;
    fit.predicted = static_cast<double>(trace.dominant_mode) * trace.dominant_mode *
                    std::exp(trace.a_infinity_predicted);
    return fit;
}

} // namespace horoflow
