#pragma once

// Transfer between the warped-product model and the Poincare ball of radius 2:
// r = log(2 + rho_E) - log(2 - rho_E), conformal factor e^phi = 4/(4 - rho_E^2).
// Curves map to curves; the Euclidean curvature of the image and the
// quantitative convexity bound kappa_E >= 2/(2 + rho_E) for h-convex inputs.

#include <cmath>
#include <vector>

#include "horoflow/curve.hpp"
#include "horoflow/errors.hpp"
#include "horoflow/spectral.hpp"

namespace horoflow {

/// Hyperbolic radius -> Euclidean radius in the radius-2 ball.
inline double warped_to_ball_radius(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("warped_to_ball_radius: need r >= 0");
    return 2.0 * std::tanh(0.5 * r);
}

/// Euclidean radius in the radius-2 ball -> hyperbolic radius,
/// r = log(2 + rho_e) - log(2 - rho_e) written as log1p to stay accurate
/// for small radii.
inline double ball_to_warped_radius(double rho_e) {
    if (!(rho_e >= 0.0 && rho_e < 2.0))
        throw DomainError("ball_to_warped_radius: need rho_e in [0, 2)");
    return std::log1p(2.0 * rho_e / (2.0 - rho_e));
}

/// Conformal factor e^phi = 4/(4 - rho_e^2). The factored denominator keeps
/// full precision near the ball boundary, where 2 - rho_e is exact but
/// 4 - rho_e^2 would cancel.
inline double ball_conformal_factor(double rho_e) {
    return 4.0 / ((2.0 - rho_e) * (2.0 + rho_e));
}

struct BallCurve {
    int n_nodes = 0;
    std::vector<double> rho_e;   // Euclidean radial distance, in (0, 2)
    std::vector<double> kappa_e; // Euclidean curvature of the image curve
};

/// Maps a radial graph to the ball model. kappa_e comes from the planar polar
/// curvature formula (r^2 + 2 r_t^2 - r r_tt) / (r^2 + r_t^2)^{3/2} with
/// spectral derivatives of the mapped radius.
inline BallCurve map_curve(const CurveGrid& curve) {
    curve.validate();
    const int n = curve.n_nodes;
    BallCurve out;
    out.n_nodes = n;
    out.rho_e.resize(n);
    out.kappa_e.resize(n);
    for (int j = 0; j < n; ++j) out.rho_e[j] = warped_to_ball_radius(curve.rho[j]);
    std::vector<double> d1(n), d2(n);
    periodic_engine(n).derivatives(out.rho_e, d1, d2);
    for (int j = 0; j < n; ++j) {
        const double r = out.rho_e[j];
        const double w = std::sqrt(r * r + d1[j] * d1[j]);
        out.kappa_e[j] = (r * r + 2.0 * d1[j] * d1[j] - r * d2[j]) / (w * w * w);
        if (!std::isfinite(out.kappa_e[j])) throw NonFiniteError("map_curve: non-finite curvature");
    }
    return out;
}

/// min over nodes of kappa_E - 2/(2 + rho_E); nonnegative for h-convex curves.
inline double ball_convexity_margin(const CurveGrid& curve) {
    const GeomFields f = derive_fields(curve);
    if (hconvexity_margin(f) < -kDefaultTolQuad)
        throw NotHConvexError("ball_convexity_margin: curve is not h-convex");
    const BallCurve b = map_curve(curve);
    double m = 1e300;
    for (int j = 0; j < curve.n_nodes; ++j)
        m = std::min(m, b.kappa_e[j] - 2.0 / (2.0 + b.rho_e[j]));
    return m;
}

/// Largest node residual of the conformal Weingarten relation
/// e^phi kappa_hyp = kappa_E + dphi(nu~); a direct check of the mapped
/// curvature against the hyperbolic one.
inline double conformal_residual_max(const CurveGrid& curve) {
    const GeomFields f = derive_fields(curve);
    const BallCurve b = map_curve(curve);
    const int n = curve.n_nodes;
    std::vector<double> d1(n), d2(n);
    periodic_engine(n).derivatives(b.rho_e, d1, d2);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const double r = b.rho_e[j];
        const double w = std::sqrt(r * r + d1[j] * d1[j]);
        // dphi = 2 rho/(4 - rho^2) drho; radial component of the Euclidean unit normal is r/w
        const double dphi_nu = 2.0 * r / (4.0 - r * r) * (r / w);
        worst = std::max(worst,
                         std::abs(ball_conformal_factor(r) * f.kappa[j] - b.kappa_e[j] - dphi_nu));
    }
    return worst;
}

/// Scale factor gamma = |S^1| / length that rescales the ball image to unit
/// circle length.
inline double rescale_to_unit_sphere(const BallCurve& b) {
    const int n = b.n_nodes;
    std::vector<double> d1(n), d2(n);
    periodic_engine(n).derivatives(b.rho_e, d1, d2);
    std::vector<double> ds(n);
    for (int j = 0; j < n; ++j) ds[j] = std::sqrt(b.rho_e[j] * b.rho_e[j] + d1[j] * d1[j]);
    return kTwoPi / trapezoid_integral(ds);
}

} // namespace horoflow
