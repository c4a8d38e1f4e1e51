#pragma once

// Parametric and randomized test families: radial graphs built from a base
// radius plus low-order Fourier terms, with rejection sampling for the
// strictly h-convex random family used by scans and property tests.

#include <utility>
#include <vector>

#include "horoflow/curve.hpp"
#include "horoflow/errors.hpp"
#include "horoflow/quermass.hpp"
#include "horoflow/rng.hpp"

namespace horoflow {

struct FourierMode {
    int k = 0;
    double amplitude = 0.0;
    double phase = 0.0;
};

inline CurveGrid curve_from_modes(int n_nodes, double base, const std::vector<FourierMode>& modes) {
    std::vector<double> rho(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        const double th = kTwoPi * j / n_nodes;
        double r = base;
        for (const FourierMode& m : modes) r += m.amplitude * std::cos(m.k * th + m.phase);
        rho[j] = r;
    }
    return make_curve(std::move(rho));
}

/// Axisymmetric profile over the polar angle; even modes keep the profile
/// reflection-symmetric about the equator.
inline AxisymmetricHypersurface hyp_from_modes(int n, int m_nodes, double base,
                                               const std::vector<FourierMode>& modes) {
    AxisymmetricHypersurface h;
    h.n = n;
    h.m_nodes = m_nodes;
    h.rho.resize(m_nodes);
    for (int j = 0; j < m_nodes; ++j) {
        const double th = (j + 0.5) * kPi / m_nodes;
        double r = base;
        for (const FourierMode& m : modes) r += m.amplitude * std::cos(m.k * th);
        h.rho[j] = r;
    }
    h.validate();
    return h;
}

struct RandomFamilyOptions {
    int count = 100;
    int n_nodes = 256;
    double margin_min = 0.01; // reject unless hconvexity margin exceeds this
    int max_mode = 6;
    double base_lo = 0.6;
    double base_hi = 1.8;
};

/// Seeded family of strictly h-convex curves: random base radius and one to
/// three low-order Fourier terms, rejected until the margin clears the bar.
inline std::vector<CurveGrid> random_hconvex_family(std::uint64_t seed,
                                                    const RandomFamilyOptions& opt = {}) {
    Rng rng(seed);
    std::vector<CurveGrid> family;
    family.reserve(opt.count);
    int guard = 0;
    while (static_cast<int>(family.size()) < opt.count) {
        if (++guard > 1000 * opt.count)
            throw DomainError("random_hconvex_family: rejection sampling stalled");
        const double base = rng.uniform(opt.base_lo, opt.base_hi);
        const int n_modes = rng.uniform_int(1, 3);
        std::vector<FourierMode> modes(n_modes);
        for (FourierMode& m : modes) {
            m.k = rng.uniform_int(1, opt.max_mode);
            m.amplitude = rng.uniform(0.0, 0.08) * base / (m.k * m.k);
            m.phase = rng.uniform(0.0, kTwoPi);
        }
        CurveGrid c = curve_from_modes(opt.n_nodes, base, modes);
        double rho_min = 1e300;
        for (double r : c.rho) rho_min = std::min(rho_min, r);
        if (rho_min < 0.05) continue;
        const GeomFields f = derive_fields(c);
        if (hconvexity_margin(f) <= opt.margin_min) continue;
        const CurveFunctionals fun = functionals(f);
        if (!(fun.la > 0.0 && fun.la < kTwoPi)) continue;
        family.push_back(std::move(c));
    }
    return family;
}

} // namespace horoflow
