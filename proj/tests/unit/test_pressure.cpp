#include "doctest.h"
#include "helpers.hpp"

#include "kch/advection.hpp"
#include "kch/errors.hpp"
#include "kch/geometry.hpp"
#include "kch/pressure.hpp"

using namespace kch;
using test::kTwoPi;

namespace {

EllipticProblem perturbed(const Grid& g, double eps) {
    EllipticProblem pb = identity_problem(g, 10.0);
    const auto bump = test::volume(g, [](double x, double y, double z) {
        return std::cos(kTwoPi * x) * std::cos(kTwoPi * y) * std::cos(std::numbers::pi * z);
    });
    for (int r = 0; r < 3; ++r) pb.d[r][r] = VolumeField(g, 1.0) + eps * bump;
    pb.d[0][1] = 0.5 * eps * bump;
    pb.d[1][0] = pb.d[0][1];
    pb.g1 = test::surface(g, [](double x, double y) { return std::cos(kTwoPi * x) + std::sin(kTwoPi * 2 * y); });
    pb.g0 = test::surface(g, [](double x, double) { return 0.5 * std::sin(kTwoPi * x); });
    return pb;
}

}  // namespace

TEST_CASE("zero data gives zero pressure") {
    const Grid g = Grid::make(16, 16, 17);
    const Spectral sp(g);
    const auto sol = solve_robin_neumann(sp, identity_problem(g, 10.0), PressureConfig{});
    CHECK(sol.q.max_abs() == 0.0);
}

TEST_CASE("manufactured discrete solution is recovered at d = I") {
    const Grid g = Grid::make(16, 16, 17);
    const Spectral sp(g);
    auto [pb, q] = test::manufactured_pressure(g, 10.0, [](double z) { return std::cosh(kTwoPi * z); });
    CHECK(test::max_diff(apply_pressure_operator(sp, pb, q), pressure_rhs(sp, pb)) <= 1e-10 * q.max_abs());
    const auto sol = solve_robin_neumann(sp, pb, PressureConfig{});
    CHECK(test::max_diff(sol.q, q) <= 1e-10 * q.max_abs());
}

TEST_CASE("continuum solution converges at second order in dz") {
    // q = cos(2 pi x1) cosh(2 pi x3) is harmonic; only the boundary data are prescribed.
    const double kappa = 10.0;
    double prev = 0.0;
    for (int n3 : {33, 65}) {
        const Grid g = Grid::make(32, 32, n3);
        const Spectral sp(g);
        auto pb = identity_problem(g, kappa);
        pb.g1 = test::surface(g, [kappa](double x, double) {
            return std::cos(kTwoPi * x) * (kTwoPi * std::sinh(kTwoPi) + kappa * std::cosh(kTwoPi));
        });
        const auto exact = test::volume(g, [](double x, double, double z) {
            return std::cos(kTwoPi * x) * std::cosh(kTwoPi * z);
        });
        const double err = test::max_diff(solve_robin_neumann(sp, pb, PressureConfig{}).q, exact) / exact.max_abs();
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.25));
        prev = err;
    }
}

TEST_CASE("variable coefficients contract geometrically") {
    const Grid g = Grid::make(16, 16, 17);
    const Spectral sp(g);
    double prev_ratio = 0.0;
    for (double eps : {0.1, 0.05}) {
        const auto pb = perturbed(g, eps);
        const auto sol = solve_robin_neumann(sp, pb, PressureConfig{});
        REQUIRE(sol.iterations() >= 3);
        double worst = 0.0;
        for (std::size_t m = 2; m < sol.updates.size(); ++m) worst = std::max(worst, sol.updates[m] / sol.updates[m - 1]);
        CHECK(worst <= 0.5);
        CHECK(sol.residual <= 1e-9);
        if (prev_ratio > 0.0) CHECK(prev_ratio / worst == doctest::Approx(2.0).epsilon(0.5));
        prev_ratio = worst;
    }
}

TEST_CASE("large coefficient defect is refused") {
    const Grid g = Grid::make(16, 16, 17);
    const Spectral sp(g);
    CHECK_THROWS_AS(solve_robin_neumann(sp, perturbed(g, 0.5), PressureConfig{}), SmallnessError);
}

TEST_CASE("iteration cap reports the contraction") {
    const Grid g = Grid::make(16, 16, 17);
    const Spectral sp(g);
    PressureConfig cfg;
    cfg.max_iter = 2;
    try {
        solve_robin_neumann(sp, perturbed(g, 0.2), cfg);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.contraction_ratio() > 0.0);
        CHECK(e.contraction_ratio() < 1.0);
    }
}

TEST_CASE("normalize_surface_mean examples") {
    const Grid g = Grid::make(16, 16, 17);
    VolumeField five(g, 5.0);
    CHECK(normalize_surface_mean(five) == doctest::Approx(5.0));
    CHECK(five.max_abs() == 0.0);

    const auto qs = test::volume(g, [](double x, double, double z) { return std::cos(kTwoPi * x) * (1 + z); });
    VolumeField q = qs;
    CHECK(std::abs(normalize_surface_mean(q)) < 1e-15);
    CHECK(test::max_diff(q, qs) < 1e-15);

    VolumeField shifted = qs + VolumeField(g, 3.0);
    CHECK(normalize_surface_mean(shifted) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(test::max_diff(shifted, qs) < 1e-14);
}

TEST_CASE("assemble_pressure_problem examples") {
    const Grid g = Grid::make(16, 16, 17);
    const Spectral sp(g);
    const PlateParams params;
    const auto flat = flat_geometry(sp);
    const SurfaceField zero(g);

    SUBCASE("flat static state") {
        const auto pb = assemble_pressure_problem(sp, make_vec3(g), flat, zero, zero, params);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) CHECK(test::max_diff(pb.d[r][c], VolumeField(g, r == c ? 1.0 : 0.0)) < 1e-15);
        for (const auto& f : pb.f) CHECK(f.max_abs() == 0.0);
        CHECK(pb.g0.max_abs() == 0.0);
        CHECK(pb.g1.max_abs() == 0.0);
    }
    SUBCASE("flat geometry, hand-expanded advection") {
        const Vec3Field v = {test::volume(g, [](double, double y, double) { return std::sin(kTwoPi * y); }),
                             test::volume(g, [](double x, double, double) { return std::cos(kTwoPi * x); }),
                             VolumeField(g)};
        const auto pb = assemble_pressure_problem(sp, v, flat, zero, zero, params);
        // A1 = v2 d2 v1, A2 = v1 d1 v2, f = -A
        const auto f1 = test::volume(g, [](double x, double y, double) {
            return -std::cos(kTwoPi * x) * kTwoPi * std::cos(kTwoPi * y);
        });
        const auto f2 = test::volume(g, [](double x, double y, double) {
            return std::sin(kTwoPi * y) * kTwoPi * std::sin(kTwoPi * x);
        });
        CHECK(test::max_diff(pb.f[0], f1) < 1e-12);
        CHECK(test::max_diff(pb.f[1], f2) < 1e-12);
        CHECK(pb.f[2].max_abs() < 1e-12);
    }
    SUBCASE("time-derivative terms vanish with w_t = 0") {
        std::mt19937_64 rng(6);
        const auto w = test::random_surface(g, rng, 0.02);
        const auto geom = build_geometry(sp, w, zero, 0.5);
        const Vec3Field v = {test::volume(g, [](double, double y, double z) { return std::sin(kTwoPi * y) * z; }),
                             VolumeField(g), VolumeField(g)};
        const auto pb = assemble_pressure_problem(sp, v, geom, w, zero, params);
        const auto A = advective_acceleration(sp, v, geom);
        for (int i = 0; i < 2; ++i) {
            VolumeField want = A[i];
            for (std::size_t n = 0; n < want.size(); ++n) want[n] *= -geom.J[n];
            CHECK(test::max_diff(pb.f[i], sp.dealiased(want)) < 1e-13);
        }
    }
}
