#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "horoflow/rng.hpp"
#include "horoflow/symfunc.hpp"

using namespace horoflow;

namespace {

// independent oracle: E_k by explicit enumeration of all k-subsets
double elem_sym_enumerated(const std::vector<double>& x, int k) {
    const int n = static_cast<int>(x.size());
    if (k == 0) return 1.0;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    double sum = 0.0;
    while (true) {
        double prod = 1.0;
        for (int i : idx) prod *= x[i];
        sum += prod;
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return sum / binom(n, k);
}

std::vector<double> random_spectrum(Rng& rng, int n, double lo, double hi) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform(lo, hi);
    return x;
}

} // namespace

TEST_CASE("elem_sym pinned values") {
    REQUIRE(elem_sym({{1, 1, 1}}) == std::vector<double>{1, 1, 1, 1});
    const auto e = elem_sym({{1, 2, 3}});
    REQUIRE(e[1] == Catch::Approx(2.0).epsilon(1e-15));
    REQUIRE(e[2] == Catch::Approx(11.0 / 3.0).epsilon(1e-15));
    REQUIRE(e[3] == Catch::Approx(6.0).epsilon(1e-15));
    REQUIRE(elem_sym({{0.0, 2.0, 5.0, -1.0}})[4] == 0.0);
}

TEST_CASE("elem_sym matches subset enumeration for n <= 8") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 8);
        CurvatureSpectrum spec{random_spectrum(rng, n, -2.0, 3.0)};
        const auto e = elem_sym(spec);
        for (int k = 0; k <= n; ++k) {
            const double oracle = elem_sym_enumerated(spec.values, k);
            REQUIRE(std::abs(e[k] - oracle) <= 1e-13 * std::max(1.0, std::abs(oracle)));
        }
    }
}

TEST_CASE("gradient pinned values") {
    const auto g1 = elem_sym_gradient({{4.0, -1.0, 7.0}}, 1);
    for (double v : g1) REQUIRE(v == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
    // E_3 = x1 x2 x3 at (1,2,3): dE_3/dx_i = E_3 / x_i = (6, 3, 2)
    const auto g3 = elem_sym_gradient({{1, 2, 3}}, 3);
    REQUIRE(g3[0] == Catch::Approx(6.0).epsilon(1e-15));
    REQUIRE(g3[1] == Catch::Approx(3.0).epsilon(1e-15));
    REQUIRE(g3[2] == Catch::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("gradient matches central finite differences") {
    Rng rng(11);
    const double h = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 7);
        const int k = rng.uniform_int(1, n);
        CurvatureSpectrum spec{random_spectrum(rng, n, 0.2, 3.0)};
        const auto grad = elem_sym_gradient(spec, k);
        const double scale = std::max(1.0, std::abs(elem_sym(spec)[k]));
        for (int i = 0; i < n; ++i) {
            CurvatureSpectrum up = spec, dn = spec;
            up.values[i] += h;
            dn.values[i] -= h;
            const double fd = (elem_sym(up)[k] - elem_sym(dn)[k]) / (2.0 * h);
            REQUIRE(std::abs(grad[i] - fd) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("contraction identities vanish") {
    for (int k = 1; k <= 4; ++k) {
        const auto r = contraction_identities({{1, 1, 1, 1}}, k);
        REQUIRE(std::abs(r.trace) <= 1e-14);
        REQUIRE(std::abs(r.first_order) <= 1e-14);
        REQUIRE(std::abs(r.second_order) <= 1e-14);
    }
    const auto r = contraction_identities({{1, 2, 3}}, 2);
    REQUIRE(std::abs(r.trace) <= 1e-12);
    REQUIRE(std::abs(r.first_order) <= 1e-12);
    REQUIRE(std::abs(r.second_order) <= 1e-12);

    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 8);
        CurvatureSpectrum spec{random_spectrum(rng, n, -2.0, 3.0)};
        const auto e = elem_sym(spec);
        double scale = 1.0;
        for (double v : e) scale = std::max(scale, std::abs(v));
        for (int k = 1; k <= n; ++k) {
            const auto res = contraction_identities(spec, k);
            REQUIRE(std::abs(res.trace) <= 1e-10 * scale);
            REQUIRE(std::abs(res.first_order) <= 1e-10 * scale);
            REQUIRE(std::abs(res.second_order) <= 1e-10 * scale * scale);
        }
    }
}

TEST_CASE("garding cone membership") {
    REQUIRE(in_garding_cone({{1, 1, 1}}, 3));
    REQUIRE(in_garding_cone({{-1, -1, 5}}, 1));  // E_1 = 1 > 0
    REQUIRE(!in_garding_cone({{-1, -1, 5}}, 2)); // E_2 = -3 < 0
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(2, 8);
        CurvatureSpectrum spec{random_spectrum(rng, n, 0.01, 5.0)};
        for (int k = 1; k <= n; ++k) REQUIRE(in_garding_cone(spec, k));
    }
}

TEST_CASE("newton-maclaurin gap") {
    // constant spectra sit exactly on the equality case
    for (double c : {0.5, 1.0, 3.0}) {
        CurvatureSpectrum spec{{c, c, c, c}};
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; l <= k; ++l)
                REQUIRE(std::abs(newton_maclaurin_gap(spec, k, l)) <= 1e-14 * std::pow(c, k + l));
    }
    // E_2^2 - E_3 E_1 at (1,2,3) = (11/3)^2 - 12 = 13/9
    REQUIRE(newton_maclaurin_gap({{1, 2, 3}}, 2, 2) == Catch::Approx(13.0 / 9.0).epsilon(1e-14));

    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 8);
        CurvatureSpectrum spec{random_spectrum(rng, n, 0.05, 4.0)};
        for (int k = 1; k <= n - 1; ++k)
            for (int l = 1; l <= k; ++l) REQUIRE(newton_maclaurin_gap(spec, k, l) >= -1e-12);
    }

    REQUIRE_THROWS_AS(newton_maclaurin_gap({{-1, -1, 5}}, 2, 1), NotInConeError);
}

TEST_CASE("shift consistency") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(2, 6);
        CurvatureSpectrum spec{random_spectrum(rng, n, 1.1, 3.0)};
        CurvatureSpectrum shifted = spec;
        for (double& v : shifted.values) v -= 1.0;
        const auto e = elem_sym(spec);
        const auto et = elem_sym(shifted);
        REQUIRE(et[1] == Catch::Approx(e[1] - 1.0).margin(1e-15));
        for (int k = 0; k <= n; ++k) {
            const double oracle = elem_sym_enumerated(shifted.values, k);
            REQUIRE(std::abs(et[k] - oracle) <= 1e-13 * std::max(1.0, std::abs(oracle)));
        }
    }
}
