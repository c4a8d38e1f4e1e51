#pragma once

// Static geometry of rotationally symmetric hypersurfaces in hyperbolic
// (n+1)-space, given as radial graphs rho(theta) over the polar angle of S^n
// on the staggered grid. Computes principal curvatures, curvature integrals,
// quermassintegrals W_0..W_{n+1} and their modified counterparts, geodesic
// ball profiles with their monotone inverses, and the inequality deficits and
// stability ratios built from them.
//
// The axisymmetric reduction keeps everything one-dimensional; profiles are
// cosine series in theta, so rho_theta vanishes at both poles by construction
// and the poles are umbilic in the limit.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "horoflow/errors.hpp"
#include "horoflow/hyperbolic.hpp"
#include "horoflow/spectral.hpp"
#include "horoflow/symfunc.hpp"

namespace horoflow {

struct AxisymmetricHypersurface {
    int n = 2;       // hypersurface dimension; n = 1 degenerates to curves and
                     // is accepted for cross-checks against the curve module
    int m_nodes = 0; // staggered polar grid theta_j = (j + 1/2) pi / m_nodes
    std::vector<double> rho;

    double theta(int j) const { return (j + 0.5) * kPi / m_nodes; }

    void validate() const {
        if (n < 1) throw DomainError("AxisymmetricHypersurface: n must be >= 1");
        if (m_nodes < 32) throw DomainError("AxisymmetricHypersurface: m_nodes must be >= 32");
        if (static_cast<int>(rho.size()) != m_nodes)
            throw DomainError("AxisymmetricHypersurface: rho size does not match m_nodes");
        for (double r : rho)
            if (!std::isfinite(r) || r <= 0.0)
                throw DomainError("AxisymmetricHypersurface: rho must be finite and positive");
    }
};

struct HypFields {
    int n = 0;
    int m_nodes = 0;
    std::vector<double> rho, rho_t1, rho_t2;
    std::vector<double> phi, phi_p, big_phi;
    std::vector<double> v;           // sqrt(phi^2 + rho_theta^2)
    std::vector<double> u;           // phi^2 / v
    std::vector<double> kappa_mer;   // meridian principal curvature
    std::vector<double> kappa_rot;   // rotational principal curvature, multiplicity n-1
    std::vector<double> area_weight; // omega_{n-1} v phi^{n-1} sin(theta)^{n-1}

    double margin() const {
        double m = kappa_mer[0] - 1.0;
        for (int j = 0; j < m_nodes; ++j) {
            m = std::min(m, kappa_mer[j] - 1.0);
            if (n >= 2) m = std::min(m, kappa_rot[j] - 1.0);
        }
        return m;
    }
};

inline HypFields hyp_fields(const AxisymmetricHypersurface& hyp) {
    hyp.validate();
    const int m = hyp.m_nodes;
    const CosineSpectral& eng = cosine_engine(m);
    HypFields f;
    f.n = hyp.n;
    f.m_nodes = m;
    f.rho = hyp.rho;
    f.rho_t1.resize(m);
    f.rho_t2.resize(m);
    eng.derivatives(f.rho, f.rho_t1, f.rho_t2);
    f.phi.resize(m);
    f.phi_p.resize(m);
    f.big_phi.resize(m);
    f.v.resize(m);
    f.u.resize(m);
    f.kappa_mer.resize(m);
    f.kappa_rot.resize(m);
    f.area_weight.resize(m);
    const double omega_rot = sphere_area(hyp.n - 1);
    for (int j = 0; j < m; ++j) {
        const double th = hyp.theta(j);
        const double sh = std::sinh(f.rho[j]);
        const double ch = std::cosh(f.rho[j]);
        const double rt = f.rho_t1[j];
        const double vv = std::sqrt(sh * sh + rt * rt);
        f.phi[j] = sh;
        f.phi_p[j] = ch;
        f.big_phi[j] = ch - 1.0;
        f.v[j] = vv;
        f.u[j] = sh * sh / vv;
        f.kappa_mer[j] = (sh * sh * ch + 2.0 * rt * rt * ch - f.rho_t2[j] * sh) / (vv * vv * vv);
        f.kappa_rot[j] = (ch - rt * (std::cos(th) / std::sin(th)) / sh) / vv;
        f.area_weight[j] = omega_rot * vv * std::pow(sh, hyp.n - 1) *
                           std::pow(std::sin(th), hyp.n - 1);
        if (!std::isfinite(f.kappa_mer[j]) || !std::isfinite(f.kappa_rot[j]))
            throw NonFiniteError("hyp_fields: non-finite curvature");
    }
    return f;
}

namespace detail {

/// integral of g dmu over the hypersurface: the sin(theta)^{n-1} factor of the
/// area element is handled by exact moments, the rest rides along in g.
inline double integrate_mu(const HypFields& f, const std::vector<double>& g) {
    const CosineSpectral& eng = cosine_engine(f.m_nodes);
    const double omega_rot = sphere_area(f.n - 1);
    std::vector<double> smooth(f.m_nodes);
    for (int j = 0; j < f.m_nodes; ++j)
        smooth[j] = g[j] * omega_rot * f.v[j] * std::pow(f.phi[j], f.n - 1);
    return eng.integrate_sin_weight(smooth, f.n - 1);
}

/// E_0..E_n per node of the (shifted) principal curvature spectrum.
inline std::vector<std::vector<double>> node_elem_sym(const HypFields& f, double shift) {
    std::vector<std::vector<double>> e(f.m_nodes);
    CurvatureSpectrum spec;
    spec.values.resize(f.n);
    for (int j = 0; j < f.m_nodes; ++j) {
        spec.values[0] = f.kappa_mer[j] - shift;
        for (int i = 1; i < f.n; ++i) spec.values[i] = f.kappa_rot[j] - shift;
        e[j] = elem_sym(spec);
    }
    return e;
}

} // namespace detail

struct QuermassVector {
    int n = 0;
    std::vector<double> W;        // W_0 .. W_{n+1}
    std::vector<double> Wt;       // modified quermassintegrals by the binomial combination
    std::vector<double> Wt_rec;   // same, recursed from the shifted curvature integrals
    std::vector<double> curv;     // integral E_k(kappa) dmu, k = 0..n
    std::vector<double> curv_shift;       // integral E_k(kappa - 1) dmu
    std::vector<double> w_bigphi_minus_u; // integral (Phi - u) E_k(kappa-1) dmu
    std::vector<double> w_phip_minus_u;   // integral (phi' - u) E_k(kappa-1) dmu
    std::vector<double> w_u;              // integral u E_k(kappa-1) dmu
    std::vector<double> shift_relation_residual; // relative, k = 1..n
    double area = 0.0;
    double margin = 0.0;
    bool hconvex = false;
};

inline QuermassVector quermass_vector(const AxisymmetricHypersurface& hyp) {
    const HypFields f = hyp_fields(hyp);
    const int n = hyp.n;
    const int m = hyp.m_nodes;
    QuermassVector q;
    q.n = n;
    q.margin = f.margin();
    q.hconvex = q.margin > 0.0;

    const auto e = detail::node_elem_sym(f, 0.0);
    const auto et = detail::node_elem_sym(f, 1.0);
    q.curv.resize(n + 1);
    q.curv_shift.resize(n + 1);
    q.w_bigphi_minus_u.resize(n + 1);
    q.w_phip_minus_u.resize(n + 1);
    q.w_u.resize(n + 1);
    std::vector<double> g(m);
    for (int k = 0; k <= n; ++k) {
        for (int j = 0; j < m; ++j) g[j] = e[j][k];
        q.curv[k] = detail::integrate_mu(f, g);
        for (int j = 0; j < m; ++j) g[j] = et[j][k];
        q.curv_shift[k] = detail::integrate_mu(f, g);
        for (int j = 0; j < m; ++j) g[j] = (f.big_phi[j] - f.u[j]) * et[j][k];
        q.w_bigphi_minus_u[k] = detail::integrate_mu(f, g);
        for (int j = 0; j < m; ++j) g[j] = (f.phi_p[j] - f.u[j]) * et[j][k];
        q.w_phip_minus_u[k] = detail::integrate_mu(f, g);
        for (int j = 0; j < m; ++j) g[j] = f.u[j] * et[j][k];
        q.w_u[k] = detail::integrate_mu(f, g);
    }
    q.area = q.curv[0];

    // enclosed volume: the exact radial antiderivative of sinh^n under the
    // same spectral polar quadrature
    {
        const CosineSpectral& eng = cosine_engine(m);
        const double omega_rot = sphere_area(n - 1);
        std::vector<double> vol(m);
        for (int j = 0; j < m; ++j) vol[j] = omega_rot * sinh_power_integral(n, f.rho[j]);
        q.W.assign(n + 2, 0.0);
        q.W[0] = eng.integrate_sin_weight(vol, n - 1);
    }
    q.W[1] = q.area / n;
    for (int k = 1; k <= n - 1; ++k)
        q.W[k + 1] = (q.curv[k] - k * q.W[k - 1]) / (n - k);
    q.W[n + 1] = sphere_area(n) / (n + 1);

    q.Wt.assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k)
        for (int i = 0; i <= k; ++i)
            q.Wt[k] += (((k - i) % 2 == 0) ? 1.0 : -1.0) * binom(k, i) * q.W[i];

    // second route: upward recursion through the shifted curvature integrals
    q.Wt_rec.assign(n + 1, 0.0);
    q.Wt_rec[0] = q.W[0];
    if (n >= 1) q.Wt_rec[1] = q.W[1] - q.W[0];
    for (int k = 1; k <= n - 1; ++k)
        q.Wt_rec[k + 1] = (q.curv_shift[k] - (n - 2 * k) * q.Wt_rec[k]) / (n - k);

    q.shift_relation_residual.assign(n + 1, 0.0);
    for (int k = 1; k <= n - 1; ++k) {
        const double expect = (n - k) * q.Wt[k + 1] + (n - 2 * k) * q.Wt[k];
        q.shift_relation_residual[k] =
            std::abs(q.curv_shift[k] - expect) / std::max(1.0, std::abs(q.curv_shift[k]));
    }
    const double expect_top = sphere_area(n) - n * q.Wt[n];
    q.shift_relation_residual[n] =
        std::abs(q.curv_shift[n] - expect_top) / std::max(1.0, std::abs(q.curv_shift[n]));
    return q;
}

// --- geodesic ball profiles ------------------------------------------------

namespace detail {

/// Fixed-order Gauss-Legendre nodes/weights on [-1,1] (Newton on P_n).
inline const std::vector<std::pair<double, double>>& gauss_legendre_24() {
    static const std::vector<std::pair<double, double>> table = [] {
        constexpr int N = 24;
        std::vector<std::pair<double, double>> t(N);
        for (int i = 0; i < N; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (N + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= N; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = N * (x * p1 - p0) / (x * x - 1.0);
            t[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return t;
    }();
    return table;
}

/// integral_0^r sinh(s)^p e^{-ks} ds by composite Gauss-Legendre; the
/// independent route used for ball volumes (p = n, k = 0) and modified
/// quermassintegrals (the hypersurface path goes through curvature integrals
/// instead).
inline double ball_profile_integral(int p, int k, double r) {
    const auto& gl = gauss_legendre_24();
    const int panels = std::max(1, static_cast<int>(std::ceil(r)));
    double total = 0.0;
    const double h = r / panels;
    for (int q = 0; q < panels; ++q) {
        const double mid = q * h + 0.5 * h;
        double s = 0.0;
        for (const auto& [x, w] : gl) {
            const double t = mid + 0.5 * h * x;
            s += w * std::pow(std::sinh(t), p) * std::exp(-k * t);
        }
        total += 0.5 * h * s;
    }
    return total;
}

} // namespace detail

inline constexpr double kBallRadiusMax = 20.0; // hyperbolic powers overflow past this

/// Quermassintegrals W_0 .. W_{n+1} of the geodesic ball of radius r.
inline std::vector<double> ball_quermass(int n, double r) {
    if (n < 1) throw DomainError("ball_quermass: n must be >= 1");
    if (!(r > 0.0 && r <= kBallRadiusMax)) throw DomainError("ball_quermass: radius out of (0, 20]");
    const double area = sphere_area(n) * std::pow(std::sinh(r), n);
    const double coth = std::cosh(r) / std::sinh(r);
    std::vector<double> W(n + 2, 0.0);
    W[0] = sphere_area(n) * detail::ball_profile_integral(n, 0, r);
    W[1] = area / n;
    double ek = area; // integral E_k dmu = area * coth^k on the sphere
    for (int k = 1; k <= n - 1; ++k) {
        ek *= coth;
        W[k + 1] = (ek - k * W[k - 1]) / (n - k);
    }
    W[n + 1] = sphere_area(n) / (n + 1);
    return W;
}

struct BallProfile {
    double f_k;  // W_k of the ball
    double ft_k; // modified W~_k of the ball
    double ht_k; // integral (Phi-u) E_k(kappa-1) dmu + (n-2k) W~_k on the ball
};

inline BallProfile ball_profile(int n, int k, double r) {
    if (n < 2) throw DomainError("ball_profile: n must be >= 2");
    if (k < 0 || k > n) throw DomainError("ball_profile: k out of range");
    const std::vector<double> W = ball_quermass(n, r);
    // W~_k(B_r) through its radial derivative, d/dr W~_k(B_r) =
    // integral E_k(kappa-1) dmu = omega_n sinh(r)^{n-k} e^{-kr}. The direct
    // binomial combination of W_i(B_r) cancels catastrophically for large r;
    // this form has a positive integrand, so it is stable and strictly
    // increasing in r by construction.
    const double ft = sphere_area(n) * detail::ball_profile_integral(n - k, k, r);
    // on the ball: Phi - u = e^{-r} - 1 and E_k(kappa-1) = (e^{-r}/sinh r)^k
    const double weighted =
        sphere_area(n) * std::pow(std::sinh(r), n - k) * std::exp(-k * r) * std::expm1(-r);
    return {W[k], ft, weighted + (n - 2 * k) * ft};
}

/// Radius r with W~_k(B_r) = target, by bisection on (1e-8, 20].
inline double invert_ft(int n, int k, double target) {
    if (n < 2) throw DomainError("invert_ft: n must be >= 2");
    if (k < 0 || k > n) throw DomainError("invert_ft: k out of range");
    double lo = 1e-8, hi = kBallRadiusMax;
    auto ft = [&](double r) { return ball_profile(n, k, r).ft_k; };
    const double flo = ft(lo), fhi = ft(hi);
    if (!(flo < fhi)) throw OutOfRangeError("invert_ft: profile not increasing on the bracket");
    if (!(target >= flo && target <= fhi))
        throw OutOfRangeError("invert_ft: target not bracketed on (1e-8, 20]");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ft(mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, mid)) break;
    }
    return 0.5 * (lo + hi);
}

// --- inequality deficits ----------------------------------------------------

struct AFDeficit {
    int k = 0, l = 0;
    double deficit = 0.0; // W~_k - ft_k(ft_l^{-1}(W~_l))
    double scale = 0.0;
    bool equality = false;
};

struct WeightedDeficit {
    int k = 0;
    double deficit = 0.0; // lhs of the weighted inequality minus its ball profile
    double scale = 0.0;
    bool equality = false;
};

struct DeficitReport {
    int n = 0;
    double margin = 0.0;
    std::vector<AFDeficit> af;           // all 0 <= l < k <= n
    std::vector<WeightedDeficit> weighted; // k = 1..n
};

inline DeficitReport af_deficits(const AxisymmetricHypersurface& hyp,
                                 double tol_quad = kDefaultTolQuad) {
    if (hyp.n < 2) throw DomainError("af_deficits: n must be >= 2");
    const QuermassVector q = quermass_vector(hyp);
    if (!(q.margin > 0.0))
        throw NotStrictlyHConvexError("af_deficits: hypersurface not strictly h-convex");
    DeficitReport rep;
    rep.n = hyp.n;
    rep.margin = q.margin;
    for (int k = 1; k <= hyp.n; ++k)
        for (int l = 0; l < k; ++l) {
            const double r = invert_ft(hyp.n, l, q.Wt[l]);
            const double rhs = ball_profile(hyp.n, k, r).ft_k;
            AFDeficit d;
            d.k = k;
            d.l = l;
            d.deficit = q.Wt[k] - rhs;
            d.scale = std::max(std::abs(q.Wt[k]), std::abs(rhs));
            d.equality = std::abs(d.deficit) <= tol_quad * d.scale;
            rep.af.push_back(d);
        }
    for (int k = 1; k <= hyp.n; ++k) {
        const double lhs = q.w_bigphi_minus_u[k] + (hyp.n - 2 * k) * q.Wt[k];
        const double r = invert_ft(hyp.n, k, q.Wt[k]);
        const double rhs = ball_profile(hyp.n, k, r).ht_k;
        WeightedDeficit d;
        d.k = k;
        d.deficit = lhs - rhs;
        d.scale = std::max(std::abs(lhs), std::abs(rhs));
        d.equality = std::abs(d.deficit) <= tol_quad * d.scale;
        rep.weighted.push_back(d);
    }
    return rep;
}

/// Stability modulus for hypersurfaces, f(s) = s^(1/2) + s^(1/4).
inline double hyp_stability_f(double s) { return std::sqrt(s) + std::pow(s, 0.25); }

struct StabilityRatios {
    double dist = 0.0; // sup |rho - a| minimized over origin-centered spheres
    double deficit_af = 0.0;
    double deficit_w = 0.0;
    std::optional<double> ratio_af; // dist / f(deficit_AF(k+1, k))
    std::optional<double> ratio_w;  // dist / f(deficit_W(k))
};

inline StabilityRatios sphere_stability_ratio(const AxisymmetricHypersurface& hyp, int k) {
    if (k < 1 || k > hyp.n - 1) throw DomainError("sphere_stability_ratio: need 1 <= k <= n-1");
    const DeficitReport rep = af_deficits(hyp);
    StabilityRatios out;
    const auto [lo, hi] = std::minmax_element(hyp.rho.begin(), hyp.rho.end());
    out.dist = 0.5 * (*hi - *lo);
    for (const AFDeficit& d : rep.af)
        if (d.k == k + 1 && d.l == k) {
            out.deficit_af = d.deficit;
            if (d.deficit > 1e-10 * d.scale) out.ratio_af = out.dist / hyp_stability_f(d.deficit);
        }
    for (const WeightedDeficit& d : rep.weighted)
        if (d.k == k) {
            out.deficit_w = d.deficit;
            if (d.deficit > 1e-10 * d.scale) out.ratio_w = out.dist / hyp_stability_f(d.deficit);
        }
    return out;
}

} // namespace horoflow
