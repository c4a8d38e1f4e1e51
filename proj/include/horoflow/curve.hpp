#pragma once

// h-convex curves in the hyperbolic plane as radial graphs rho(theta) over the
// unit circle: pointwise geometry (support function, geodesic curvature) and
// the global functionals built from it (length, area, the Heintze-Karcher
// functional, the weighted monotone functional, and inequality deficits).

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "horoflow/errors.hpp"
#include "horoflow/hyperbolic.hpp"
#include "horoflow/spectral.hpp"

namespace horoflow {

struct CurveGrid {
    int n_nodes = 0;
    std::vector<double> rho; // node j sits at theta_j = 2 pi j / n_nodes

    double theta(int j) const { return kTwoPi * j / n_nodes; }
    double dtheta() const { return kTwoPi / n_nodes; }

    void validate() const {
        if (n_nodes < 16 || n_nodes % 2 != 0)
            throw DomainError("CurveGrid: n_nodes must be even and >= 16");
        if (static_cast<int>(rho.size()) != n_nodes)
            throw DomainError("CurveGrid: rho size does not match n_nodes");
        for (double r : rho)
            if (!std::isfinite(r) || r <= 0.0)
                throw DomainError("CurveGrid: rho must be finite and positive");
    }
};

inline CurveGrid make_curve(std::vector<double> rho) {
    CurveGrid c{static_cast<int>(rho.size()), std::move(rho)};
    c.validate();
    return c;
}

struct GeomFields {
    int n_nodes = 0;
    std::vector<double> rho;
    std::vector<double> rho_t1;  // d rho / d theta
    std::vector<double> rho_t2;  // d^2 rho / d theta^2
    std::vector<double> phi;     // sinh rho
    std::vector<double> phi_p;   // cosh rho
    std::vector<double> big_phi; // cosh rho - 1
    std::vector<double> v;       // sqrt(phi^2 + rho_theta^2) = ds/dtheta
    std::vector<double> u;       // support function, phi^2 / v
    std::vector<double> kappa;   // geodesic curvature

    double dtheta() const { return kTwoPi / n_nodes; }
    double kappa_min() const { return *std::min_element(kappa.begin(), kappa.end()); }
    double kappa_max() const { return *std::max_element(kappa.begin(), kappa.end()); }
};

/// Pointwise geometry of the radial graph. Derivatives are exact
/// discrete-Fourier derivatives; kappa follows the radial-graph curvature
/// formula (phi^2 phi' + 2 rho_t^2 phi' - rho_tt phi) / v^3.
inline GeomFields derive_fields(const CurveGrid& curve) {
    curve.validate();
    const int n = curve.n_nodes;
    GeomFields f;
    f.n_nodes = n;
    f.rho = curve.rho;
    f.rho_t1.resize(n);
    f.rho_t2.resize(n);
    periodic_engine(n).derivatives(f.rho, f.rho_t1, f.rho_t2);
    f.phi.resize(n);
    f.phi_p.resize(n);
    f.big_phi.resize(n);
    f.v.resize(n);
    f.u.resize(n);
    f.kappa.resize(n);
    for (int j = 0; j < n; ++j) {
        const double sh = std::sinh(f.rho[j]);
        const double ch = std::cosh(f.rho[j]);
        const double rt = f.rho_t1[j];
        const double vv = std::sqrt(sh * sh + rt * rt);
        f.phi[j] = sh;
        f.phi_p[j] = ch;
        f.big_phi[j] = ch - 1.0;
        f.v[j] = vv;
        f.u[j] = sh * sh / vv;
        f.kappa[j] = (sh * sh * ch + 2.0 * rt * rt * ch - f.rho_t2[j] * sh) / (vv * vv * vv);
        if (!std::isfinite(f.kappa[j]) || !std::isfinite(f.u[j]))
            throw NonFiniteError("derive_fields: non-finite geometry (invalid or under-resolved curve)");
    }
    return f;
}

inline double hconvexity_margin(const GeomFields& f) { return f.kappa_min() - 1.0; }

struct CurveFunctionals {
    double length = 0;
    double area = 0;
    double la = 0;                // length - area, conserved along the flow
    std::optional<double> hk_q;   // Heintze-Karcher functional; absent unless strictly h-convex
    double weighted_m = 0;        // integral (Phi - u)(kappa - 1) ds
    double mink_residual = 0;     // integral (phi' - kappa u) ds, zero in the continuum
    double kappa_min = 0, kappa_max = 0;
    double rho_min = 0, rho_max = 0;
};

inline CurveFunctionals functionals(const GeomFields& f) {
    const int n = f.n_nodes;
    CurveFunctionals out;
    double L = 0, A = 0, M = 0, R = 0, Q = 0;
    for (int j = 0; j < n; ++j) {
        L += f.v[j];
        A += f.big_phi[j];
        M += (f.big_phi[j] - f.u[j]) * (f.kappa[j] - 1.0) * f.v[j];
        R += (f.phi_p[j] - f.kappa[j] * f.u[j]) * f.v[j];
    }
    const double w = kTwoPi / n;
    out.length = L * w;
    out.area = A * w;
    out.la = out.length - out.area;
    out.weighted_m = M * w;
    out.mink_residual = R * w;
    const auto [kmin_it, kmax_it] = std::minmax_element(f.kappa.begin(), f.kappa.end());
    out.kappa_min = *kmin_it;
    out.kappa_max = *kmax_it;
    const auto [rmin_it, rmax_it] = std::minmax_element(f.rho.begin(), f.rho.end());
    out.rho_min = *rmin_it;
    out.rho_max = *rmax_it;
    if (out.kappa_min - 1.0 > kStrictMargin) {
        for (int j = 0; j < n; ++j)
            Q += ((f.phi_p[j] - f.u[j]) / (f.kappa[j] - 1.0) - f.u[j]) * f.v[j];
        out.hk_q = Q * w;
    }
    return out;
}

struct BestCircle {
    double radius;      // midrange, minimizes sup |rho - a| over origin-centered circles
    double dist;        // sup |rho - radius|
    double mean_radius; // (1/2pi) integral rho dtheta, reported for diagnostics
};

inline BestCircle best_circle(const CurveGrid& curve) {
    curve.validate();
    const auto [lo, hi] = std::minmax_element(curve.rho.begin(), curve.rho.end());
    double mean = 0.0;
    for (double r : curve.rho) mean += r;
    mean /= curve.n_nodes;
    return {0.5 * (*lo + *hi), 0.5 * (*hi - *lo), mean};
}

/// Stability modulus for curves, f(s) = s^(1/2) + s^(1/6).
inline double curve_stability_f(double s) { return std::sqrt(s) + std::pow(s, 1.0 / 6.0); }

struct InequalityReport {
    double lhs = 0;     // weighted_m + (L - A)
    double rhs = 0;     // (L - A)^2 / (2 pi)
    double deficit = 0; // lhs - rhs, nonnegative for h-convex curves
    std::optional<double> stability_ratio; // circle_dist / f(deficit); absent at equality
    double circle_radius = 0;
    double circle_dist = 0;
    double circle_mean_radius = 0;
};

inline InequalityReport inequality_report(const GeomFields& f, double tol_quad = kDefaultTolQuad) {
    const CurveFunctionals fun = functionals(f);
    InequalityReport rep;
    rep.lhs = fun.weighted_m + fun.la;
    rep.rhs = fun.la * fun.la / kTwoPi;
    rep.deficit = rep.lhs - rep.rhs;
    const BestCircle bc = best_circle(CurveGrid{f.n_nodes, f.rho});
    rep.circle_radius = bc.radius;
    rep.circle_dist = bc.dist;
    rep.circle_mean_radius = bc.mean_radius;
    if (rep.deficit > tol_quad && fun.kappa_min - 1.0 > kStrictMargin)
        rep.stability_ratio = bc.dist / curve_stability_f(std::max(rep.deficit, 0.0));
    return rep;
}

} // namespace horoflow
