#include <catch_amalgamated.hpp>

#include <cmath>

#include "horoflow/ball_model.hpp"
#include "horoflow/families.hpp"

using namespace horoflow;

TEST_CASE("radius transfer and its inverse") {
    REQUIRE(warped_to_ball_radius(0.0) == 0.0);
    REQUIRE(warped_to_ball_radius(1.0) ==
            Catch::Approx(2.0 * std::tanh(0.5)).epsilon(1e-15)); // ~0.92423
    REQUIRE(ball_to_warped_radius(2.0 * std::tanh(0.5)) == Catch::Approx(1.0).epsilon(1e-14));

    // r -> rho_e -> r. Rounding rho_e to a double near the ball boundary
    // erases fine r information (dr/drho = cosh^2(r/2)), so the r-direction
    // round trip is checked on the range where one ulp of rho_e stays below
    // 1e-12 relative in r.
    double prev = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double r = std::pow(10.0, -6.0 + (std::log10(12.0) + 6.0) * i / 999.0);
        const double rho_e = warped_to_ball_radius(r);
        REQUIRE(rho_e > prev); // strictly increasing
        prev = rho_e;
        REQUIRE(ball_to_warped_radius(rho_e) == Catch::Approx(r).epsilon(1e-12));
    }
    // rho_e -> r -> rho_e is well conditioned over the whole stated range.
    for (int i = 0; i < 1000; ++i) {
        const double r = std::pow(10.0, -6.0 + (std::log10(20.0) + 6.0) * i / 999.0);
        const double rho_e = warped_to_ball_radius(r);
        REQUIRE(warped_to_ball_radius(ball_to_warped_radius(rho_e)) ==
                Catch::Approx(rho_e).epsilon(1e-12));
    }

    REQUIRE_THROWS_AS(warped_to_ball_radius(-0.1), DomainError);
    REQUIRE_THROWS_AS(ball_to_warped_radius(2.0), DomainError);
}

TEST_CASE("conformal factor identity") {
    for (int i = 0; i < 1000; ++i) {
        const double r = std::pow(10.0, -6.0 + (std::log10(20.0) + 6.0) * i / 999.0);
        const double rho_e = warped_to_ball_radius(r);
        // compare against cosh^2(r_hat/2) where r_hat is the radius the
        // rounded rho_e actually represents
        const double r_hat = ball_to_warped_radius(rho_e);
        const double c = std::cosh(0.5 * r_hat);
        REQUIRE(ball_conformal_factor(rho_e) == Catch::Approx(c * c).epsilon(1e-12));
        if (r <= 8.0) { // below the conditioning limit the direct form holds too
            const double cd = std::cosh(0.5 * r);
            REQUIRE(ball_conformal_factor(rho_e) == Catch::Approx(cd * cd).epsilon(1e-12));
        }
    }
}

TEST_CASE("circles map to circles") {
    for (double r : {0.4, 1.0, 2.5}) {
        const BallCurve b = map_curve(curve_from_modes(64, r, {}));
        const double rho_e = warped_to_ball_radius(r);
        for (int j = 0; j < 64; ++j) {
            REQUIRE(b.rho_e[j] == Catch::Approx(rho_e).epsilon(1e-14));
            REQUIRE(b.kappa_e[j] == Catch::Approx(1.0 / rho_e).epsilon(1e-12));
        }
        REQUIRE(rescale_to_unit_sphere(b) == Catch::Approx(1.0 / rho_e).epsilon(1e-12));
    }
}

TEST_CASE("conformal weingarten relation") {
    // exact on circles
    for (double r : {0.5, 1.0, 2.0})
        REQUIRE(conformal_residual_max(curve_from_modes(64, r, {})) <= 1e-10);
    // and spectrally small on smooth graphs
    REQUIRE(conformal_residual_max(curve_from_modes(256, 1.0, {{2, 0.1, 0.0}})) <= 1e-8);
}

TEST_CASE("mapped curvature matches the grid-refinement oracle") {
    const BallCurve a = map_curve(curve_from_modes(256, 1.0, {{2, 0.1, 0.0}}));
    const BallCurve b = map_curve(curve_from_modes(4096, 1.0, {{2, 0.1, 0.0}}));
    for (int j = 0; j < 256; ++j)
        REQUIRE(std::abs(a.kappa_e[j] - b.kappa_e[16 * j]) <= 1e-9);
}

TEST_CASE("h-convexity transfers to ball convexity") {
    // pinned circle example: kappa_E = 1/(2 tanh(1/2)), bound = 2/(2 + 2 tanh(1/2))
    const double m = ball_convexity_margin(curve_from_modes(64, 1.0, {}));
    const double rho_e = 2.0 * std::tanh(0.5);
    REQUIRE(m == Catch::Approx(1.0 / rho_e - 2.0 / (2.0 + rho_e)).epsilon(1e-12)); // ~0.398

    for (const CurveGrid& c : random_hconvex_family(555, {.count = 100}))
        REQUIRE(ball_convexity_margin(c) > 0.0);

    // boundary case: hyperbolic margin ~ 0 at one node still satisfies the bound
    double lo = 0.0, hi = 0.8;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (hconvexity_margin(derive_fields(curve_from_modes(256, 1.0, {{1, mid, 0.0}}))) > 0.0
             ? lo
             : hi) = mid;
    }
    const CurveGrid touching = curve_from_modes(256, 1.0, {{1, 0.5 * (lo + hi), 0.0}});
    REQUIRE(ball_convexity_margin(touching) >= -1e-8);

    const CurveGrid flat = curve_from_modes(256, 1.0, {{2, 0.5, 0.0}});
    REQUIRE_THROWS_AS(ball_convexity_margin(flat), NotHConvexError);
}
