#pragma once

// Pseudo-spectral machinery on two 1-D grids:
//
//  * PeriodicSpectral: uniform periodic grid theta_j = 2 pi j / n, exact
//    discrete-Fourier differentiation via FFTW, trapezoid quadrature.
//  * CosineSpectral: staggered polar grid theta_j = (j+1/2) pi / m for even
//    profiles on [0, pi], cosine-series differentiation and spectrally
//    accurate integration against sin(theta)^p weights via exact moments.
//
// All FFTW plans use FFTW_ESTIMATE: plan choice is then deterministic, which
// keeps outputs byte-identical run to run. Plan creation is serialized by a
// global mutex (FFTW requirement); each engine owns its buffers, so per-thread
// engine instances may execute concurrently.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "horoflow/errors.hpp"
#include "horoflow/hyperbolic.hpp"

namespace horoflow {

namespace detail {
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

class PeriodicSpectral {
public:
    explicit PeriodicSpectral(int n) : n_(n) {
        if (n < 4 || n % 2 != 0) throw DomainError("PeriodicSpectral: grid size must be even and >= 4");
        real_ = fftw_alloc_real(n);
        spec_ = fftw_alloc_complex(n / 2 + 1);
        work_ = fftw_alloc_complex(n / 2 + 1);
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(n, work_, real_, FFTW_ESTIMATE);
    }

    ~PeriodicSpectral() {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(spec_);
        fftw_free(work_);
    }

    PeriodicSpectral(const PeriodicSpectral&) = delete;
    PeriodicSpectral& operator=(const PeriodicSpectral&) = delete;

    int size() const { return n_; }

    /// First and second theta-derivatives of a periodic sample vector.
    void derivatives(std::span<const double> f, std::span<double> d1, std::span<double> d2) {
        forward(f);
        const int nc = n_ / 2 + 1;
        // d1: multiply by ik, Nyquist mode dropped (its sine image vanishes on the grid)
        for (int k = 0; k < nc; ++k) {
            const double re = spec_[k][0], im = spec_[k][1];
            work_[k][0] = -k * im;
            work_[k][1] = k * re;
        }
        work_[n_ / 2][0] = 0.0;
        work_[n_ / 2][1] = 0.0;
        backward(d1);
        // d2: multiply by -k^2, Nyquist kept
        for (int k = 0; k < nc; ++k) {
            const double w = -static_cast<double>(k) * k;
            work_[k][0] = w * spec_[k][0];
            work_[k][1] = w * spec_[k][1];
        }
        backward(d2);
    }

    /// Projects f onto Fourier modes |k| <= k_cut in place.
    void lowpass(std::span<double> f, int k_cut) {
        forward(f);
        const int nc = n_ / 2 + 1;
        for (int k = 0; k < nc; ++k) {
            if (k > k_cut) {
                work_[k][0] = 0.0;
                work_[k][1] = 0.0;
            } else {
                work_[k][0] = spec_[k][0];
                work_[k][1] = spec_[k][1];
            }
        }
        backward(f);
    }

    /// Magnitudes |c_k| of the one-sided Fourier coefficients, k = 0 .. n/2.
    std::vector<double> mode_amplitudes(std::span<const double> f) {
        forward(f);
        std::vector<double> amp(n_ / 2 + 1);
        for (int k = 0; k <= n_ / 2; ++k) {
            const double scale = (k == 0 || k == n_ / 2) ? 1.0 : 2.0;
            amp[k] = scale * std::hypot(spec_[k][0], spec_[k][1]) / n_;
        }
        return amp;
    }

    /// Largest-amplitude nonzero mode; ties break toward the smaller k.
    int dominant_mode(std::span<const double> f) {
        const std::vector<double> amp = mode_amplitudes(f);
        int best = 1;
        for (int k = 2; k <= n_ / 2; ++k)
            if (amp[k] > amp[best]) best = k;
        return best;
    }

private:
    void forward(std::span<const double> f) {
        std::copy(f.begin(), f.end(), real_);
        fftw_execute(fwd_);
    }

    void backward(std::span<double> out) {
        fftw_execute(bwd_);
        const double inv = 1.0 / n_;
        for (int j = 0; j < n_; ++j) out[j] = real_[j] * inv;
    }

    int n_;
    double* real_;
    fftw_complex* spec_;
    fftw_complex* work_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

/// Per-thread engine cache keyed by grid size; flow stepping reuses plans.
inline PeriodicSpectral& periodic_engine(int n) {
    thread_local std::unordered_map<int, std::unique_ptr<PeriodicSpectral>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<PeriodicSpectral>(n)).first;
    return *it->second;
}

/// Periodic trapezoid rule on the uniform grid (spectrally accurate for
/// smooth periodic integrands).
inline double trapezoid_integral(std::span<const double> f) {
    double s = 0.0;
    for (double x : f) s += x;
    return s * kTwoPi / static_cast<double>(f.size());
}

// ---------------------------------------------------------------------------

class CosineSpectral {
public:
    explicit CosineSpectral(int m) : m_(m) {
        if (m < 4) throw DomainError("CosineSpectral: grid size must be >= 4");
        cos_.resize(static_cast<size_t>(m) * m);
        sin_.resize(static_cast<size_t>(m) * m);
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j) {
                const double t = k * theta(j);
                cos_[static_cast<size_t>(k) * m + j] = std::cos(t);
                sin_[static_cast<size_t>(k) * m + j] = std::sin(t);
            }
    }

    int size() const { return m_; }
    double theta(int j) const { return (j + 0.5) * kPi / m_; }

    /// Coefficients c_k with f(theta) = sum_k c_k cos(k theta); exact for
    /// cosine polynomials of degree < m on the staggered grid.
    std::vector<double> coefficients(std::span<const double> f) const {
        std::vector<double> c(m_, 0.0);
        for (int k = 0; k < m_; ++k) {
            const double* row = &cos_[static_cast<size_t>(k) * m_];
            double s = 0.0;
            for (int j = 0; j < m_; ++j) s += row[j] * f[j];
            c[k] = (k == 0 ? s / m_ : 2.0 * s / m_);
        }
        return c;
    }

    void derivatives(std::span<const double> f, std::span<double> d1, std::span<double> d2) const {
        const std::vector<double> c = coefficients(f);
        for (int j = 0; j < m_; ++j) {
            double s1 = 0.0, s2 = 0.0;
            for (int k = 1; k < m_; ++k) {
                const size_t idx = static_cast<size_t>(k) * m_ + j;
                s1 -= k * c[k] * sin_[idx];
                s2 -= static_cast<double>(k) * k * c[k] * cos_[idx];
            }
            d1[j] = s1;
            d2[j] = s2;
        }
    }

    /// integral_0^pi g(theta) sin(theta)^p dtheta for a smooth even g given by
    /// samples on the staggered grid. Expands g in cosines and contracts with
    /// the exact moments integral cos(k theta) sin(theta)^p dtheta, so the only
    /// error is the (geometrically small) cosine tail of g.
    double integrate_sin_weight(std::span<const double> g, int p) const {
        const std::vector<double>& mom = moments(p);
        const std::vector<double> c = coefficients(g);
        double s = 0.0;
        for (int k = 0; k < m_; ++k) s += c[k] * mom[k];
        return s;
    }

    /// Moments M_k = integral_0^pi cos(k theta) sin(theta)^p dtheta from the
    /// finite trigonometric expansion of sin^p.
    const std::vector<double>& moments(int p) const {
        if (p < 0) throw DomainError("CosineSpectral: negative sin power");
        auto it = moments_.find(p);
        if (it != moments_.end()) return it->second;
        std::vector<double> mom(m_, 0.0);
        const double scale = std::pow(2.0, 1 - p);
        if (p % 2 == 0) {
            // sin^p = binom(p,p/2)/2^p + 2^{1-p} sum_l (-1)^l binom(p,p/2-l) cos(2l theta)
            mom[0] = kPi * binom(p, p / 2) * std::pow(2.0, -p);
            for (int k = 2; k < m_ && k <= p; k += 2) {
                const int l = k / 2;
                const double sign = (l % 2 == 0) ? 1.0 : -1.0;
                mom[k] = 0.5 * kPi * scale * sign * binom(p, p / 2 - l);
            }
        } else {
            // sin^p = 2^{1-p} sum_l (-1)^l binom(p,(p-1)/2-l) sin((2l+1) theta);
            // integral sin(q theta) cos(k theta) over [0,pi] is 2q/(q^2-k^2) for even k.
            for (int k = 0; k < m_; k += 2) {
                double s = 0.0;
                for (int l = 0; l <= (p - 1) / 2; ++l) {
                    const double q = 2 * l + 1;
                    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
                    s += scale * sign * binom(p, (p - 1) / 2 - l) * 2.0 * q / (q * q - k * k);
                }
                mom[k] = s;
            }
        }
        return moments_.emplace(p, std::move(mom)).first->second;
    }

private:
    int m_;
    std::vector<double> cos_;
    std::vector<double> sin_;
    mutable std::unordered_map<int, std::vector<double>> moments_;
};

inline CosineSpectral& cosine_engine(int m) {
    thread_local std::unordered_map<int, std::unique_ptr<CosineSpectral>> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<CosineSpectral>(m)).first;
    return *it->second;
}

} // namespace horoflow
