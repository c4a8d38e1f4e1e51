#pragma once

// Warped-product model of hyperbolic space: metric dr^2 + sinh(r)^2 g_S,
// with weight functions phi = sinh r, phi' = cosh r, Phi = cosh r - 1.

#include <cmath>
#include <vector>

#include "horoflow/errors.hpp"

namespace horoflow {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default absolute quadrature tolerance (scaled by the relevant functional where stated).
inline constexpr double kDefaultTolQuad = 1e-8;

/// Curvature margin below which kappa > 1 operations reject the input:
/// the 1/(kappa-1) denominators are considered near-singular past this point.
inline constexpr double kStrictMargin = 1e-6;

/// Area of the unit n-sphere, |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
inline double sphere_area(int n) {
    if (n < 0) throw DomainError("sphere_area: n must be >= 0");
    return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

/// Antiderivative S_n(r) = integral_0^r sinh(s)^n ds by the standard
/// reduction S_n = (sinh^{n-1} r cosh r - (n-1) S_{n-2}) / n.
inline double sinh_power_integral(int n, double r) {
    if (n < 0) throw DomainError("sinh_power_integral: n must be >= 0");
    if (n == 0) return r;
    if (n == 1) return std::cosh(r) - 1.0;
    double s2 = r;                  // S_0
    double s1 = std::cosh(r) - 1.0; // S_1
    const double sh = std::sinh(r);
    const double ch = std::cosh(r);
    double cur = s1;
    for (int m = 2; m <= n; ++m) {
        cur = (std::pow(sh, m - 1) * ch - (m - 1) * s2) / m;
        s2 = s1;
        s1 = cur;
    }
    return cur;
}

/// coth(r) - 1 evaluated stably as e^{-r}/sinh(r).
inline double coth_minus_one(double r) { return std::exp(-r) / std::sinh(r); }

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

} // namespace horoflow
