#pragma once

// Normalized elementary symmetric functions E_k of a principal-curvature
// vector, their gradients, the Garding cone, and the Newton-MacLaurin gap.
//
// E_k(x) = binom(n,k)^{-1} sum over k-subsets of products. Evaluation goes
// through the Newton-triangle recurrence (one pass, O(n^2)); gradients deflate
// one entry and rerun the recurrence instead of dividing E_k relations, which
// would cancel badly at small or repeated entries.

#include <cmath>
#include <span>
#include <vector>

#include "horoflow/errors.hpp"
#include "horoflow/hyperbolic.hpp"

namespace horoflow {

struct CurvatureSpectrum {
    std::vector<double> values;

    int n() const { return static_cast<int>(values.size()); }

    void validate() const {
        if (values.empty()) throw DomainError("CurvatureSpectrum: empty");
        for (double x : values)
            if (!std::isfinite(x)) throw NonFiniteError("CurvatureSpectrum: non-finite entry");
    }
};

namespace detail {

/// Unnormalized e_0..e_kmax of the given values by the triangle recurrence.
inline std::vector<double> elem_sym_unnormalized(std::span<const double> x, int kmax) {
    std::vector<double> e(kmax + 1, 0.0);
    e[0] = 1.0;
    int filled = 0;
    for (double xi : x) {
        ++filled;
        const int top = std::min(filled, kmax);
        for (int k = top; k >= 1; --k) e[k] += xi * e[k - 1];
    }
    return e;
}

} // namespace detail

/// (E_0, ..., E_n) of the spectrum.
inline std::vector<double> elem_sym(const CurvatureSpectrum& spec) {
    spec.validate();
    const int n = spec.n();
    std::vector<double> e = detail::elem_sym_unnormalized(spec.values, n);
    for (int k = 0; k <= n; ++k) e[k] /= binom(n, k);
    return e;
}

/// Gradient (dE_k/dx_1, ..., dE_k/dx_n): each component is the deflated
/// unnormalized e_{k-1} over binom(n,k).
inline std::vector<double> elem_sym_gradient(const CurvatureSpectrum& spec, int k) {
    spec.validate();
    const int n = spec.n();
    if (k < 1 || k > n) throw DomainError("elem_sym_gradient: k out of range");
    std::vector<double> grad(n);
    std::vector<double> rest(n - 1);
    const double norm = binom(n, k);
    for (int i = 0; i < n; ++i) {
        int w = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) rest[w++] = spec.values[j];
        const std::vector<double> e = detail::elem_sym_unnormalized(rest, k - 1);
        grad[i] = e[k - 1] / norm;
    }
    return grad;
}

struct ContractionResiduals {
    double trace;          // sum_i dE_k/dx_i            - k E_{k-1}
    double first_order;    // sum_i dE_k/dx_i x_i        - k E_k
    double second_order;   // sum_i dE_k/dx_i x_i^2      - (n E_1 E_k - (n-k) E_{k+1})
};

inline ContractionResiduals contraction_identities(const CurvatureSpectrum& spec, int k) {
    const int n = spec.n();
    if (k < 1 || k > n) throw DomainError("contraction_identities: k out of range");
    const std::vector<double> e = elem_sym(spec);
    const std::vector<double> grad = elem_sym_gradient(spec, k);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = spec.values[i];
        s0 += grad[i];
        s1 += grad[i] * x;
        s2 += grad[i] * x * x;
    }
    const double ekp1 = (k + 1 <= n) ? e[k + 1] : 0.0;
    return {s0 - k * e[k - 1],
            s1 - k * e[k],
            s2 - (n * e[1] * e[k] - (n - k) * ekp1)};
}

/// Garding cone membership: E_1, ..., E_k all strictly positive.
inline bool in_garding_cone(const CurvatureSpectrum& spec, int k) {
    const int n = spec.n();
    if (k < 1 || k > n) throw DomainError("in_garding_cone: k out of range");
    const std::vector<double> e = elem_sym(spec);
    for (int i = 1; i <= k; ++i)
        if (!(e[i] > 0.0)) return false;
    return true;
}

/// E_l E_k - E_{k+1} E_{l-1}, nonnegative on the Garding cone Gamma_k^+ with
/// equality exactly at constant spectra.
inline double newton_maclaurin_gap(const CurvatureSpectrum& spec, int k, int l) {
    const int n = spec.n();
    if (l < 1 || l > k || k + 1 > n) throw DomainError("newton_maclaurin_gap: need 1 <= l <= k <= n-1");
    if (!in_garding_cone(spec, k)) throw NotInConeError("newton_maclaurin_gap: spectrum outside Gamma_k+");
    const std::vector<double> e = elem_sym(spec);
    return e[l] * e[k] - e[k + 1] * e[l - 1];
}

} // namespace horoflow
