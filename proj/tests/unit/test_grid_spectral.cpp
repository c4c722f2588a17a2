#include "doctest.h"
#include "helpers.hpp"

#include "kch/errors.hpp"
#include "kch/norms.hpp"
#include "kch/spectral.hpp"

using namespace kch;
using test::kTwoPi;

TEST_CASE("grid rejects unsupported sizes") {
    CHECK_THROWS_AS(Grid::make(12, 16, 17), ConfigError);
    CHECK_THROWS_AS(Grid::make(16, 4, 17), ConfigError);
    CHECK_THROWS_AS(Grid::make(16, 16, 5), ConfigError);
    CHECK_NOTHROW(Grid::make(16, 32, 9));
}

TEST_CASE("forward transform puts the plane mean in mode (0,0)") {
    const Grid g = Grid::make(16, 16, 9);
    const Spectral sp(g);
    const auto f = test::surface(g, [](double x, double y) { return 2.5 + std::cos(kTwoPi * x) * std::sin(kTwoPi * y); });
    const auto s = sp.forward(f);
    CHECK(s(0, 0).real() == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(std::abs(s(0, 0).imag()) < 1e-15);
    CHECK(test::max_diff(sp.to_surface(s), f) < 1e-14);
}

TEST_CASE("spectral derivatives are exact on resolved modes") {
    const Grid g = Grid::make(16, 16, 9);
    const Spectral sp(g);
    const auto f = test::surface(g, [](double x, double y) { return std::sin(kTwoPi * (2 * x + y)); });
    const auto fx = test::surface(g, [](double x, double y) { return 2 * kTwoPi * std::cos(kTwoPi * (2 * x + y)); });
    const auto fyy = test::surface(g, [](double x, double y) { return -kTwoPi * kTwoPi * std::sin(kTwoPi * (2 * x + y)); });
    CHECK(test::max_diff(sp.derivative(f, 1, 0), fx) < 1e-12);
    CHECK(test::max_diff(sp.derivative(f, 0, 2), fyy) < 1e-11);
}

TEST_CASE("dealiasing keeps the 2/3 band and removes the rest") {
    const Grid g = Grid::make(16, 16, 9);
    const Spectral sp(g);
    const auto low = test::surface(g, [](double x, double) { return std::cos(kTwoPi * 5 * x); });
    const auto high = test::surface(g, [](double x, double) { return std::cos(kTwoPi * 6 * x); });
    CHECK(test::max_diff(sp.dealiased(low), low) < 1e-14);
    CHECK(sp.dealiased(high).max_abs() < 1e-14);
}

TEST_CASE("vertical differences are second order and exact on quadratics") {
    const Grid g = Grid::make(8, 8, 17);
    const auto q = test::volume(g, [](double, double, double z) { return 3 * z * z - z + 1; });
    const auto dq = d3(q, g.dz());
    const auto ddq = d33(q, g.dz());
    for (int k = 0; k < g.n3; ++k) {
        CHECK(dq(1, 2, k) == doctest::Approx(6 * g.x3(k) - 1).epsilon(1e-12));
        CHECK(ddq(1, 2, k) == doctest::Approx(6.0).epsilon(1e-10));
    }
}

TEST_CASE("sobolev_proxy examples") {
    const Grid g = Grid::make(16, 16, 9);
    const Spectral sp(g);
    CHECK(sobolev_proxy(sp, SurfaceField(g), 2.0) == 0.0);
    const auto c = test::surface(g, [](double x, double) { return std::cos(kTwoPi * x); });
    CHECK(sobolev_proxy(sp, c, 1.0) == doctest::Approx(std::sqrt((1 + kTwoPi * kTwoPi) * 0.5)).epsilon(1e-13));

    std::mt19937_64 rng(7);
    const auto f = test::random_surface(g, rng, 1.0);
    CHECK(sobolev_proxy(sp, f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
    const auto v = test::volume(g, [](double x, double y, double z) { return std::sin(kTwoPi * x) * (1 + z) + y; });
    CHECK(sobolev_proxy(sp, v, 0.0, 0) == doctest::Approx(l2_norm(v)).epsilon(1e-12));
}

TEST_CASE("sobolev_proxy is a norm and monotone in s") {
    const Grid g = Grid::make(16, 16, 9);
    const Spectral sp(g);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = test::random_surface(g, rng, 1.0);
        const auto b = test::random_surface(g, rng, 1.0);
        const double na = sobolev_proxy(sp, a, 1.5), nb = sobolev_proxy(sp, b, 1.5);
        CHECK(sobolev_proxy(sp, -3.0 * a, 1.5) == doctest::Approx(3 * na).epsilon(1e-13));
        CHECK(sobolev_proxy(sp, a + b, 1.5) <= na + nb + 1e-12);
        CHECK(sobolev_proxy(sp, a, 0.5) <= sobolev_proxy(sp, a, 1.0));
        CHECK(sobolev_proxy(sp, a, 1.0) <= na);
    }
}
