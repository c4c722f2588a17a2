#include "doctest.h"
#include "helpers.hpp"

#include "kch/geometry.hpp"
#include "kch/kernels.hpp"

#include <vector>

using namespace kch;
using namespace kch::kernels;

namespace {

// Rows exactly as documented on robin_neumann_column, solved by plain Gaussian elimination.
std::vector<double> column_reference(const std::vector<double>& rhs, double dz, double K, double kappa) {
    const int n = static_cast<int>(rhs.size());
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    a[0][0] = -3 / (2 * dz), a[0][1] = 4 / (2 * dz), a[0][2] = -1 / (2 * dz);
    for (int k = 1; k < n - 1; ++k) {
        a[k][k - 1] = 1 / (dz * dz);
        a[k][k] = -2 / (dz * dz) - K;
        a[k][k + 1] = 1 / (dz * dz);
    }
    a[n - 1][n - 3] = 1 / (2 * dz), a[n - 1][n - 2] = -4 / (2 * dz), a[n - 1][n - 1] = 3 / (2 * dz) + kappa;
    for (int k = 0; k < n; ++k) a[k][n] = rhs[k];
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int m = c; m <= n; ++m) a[r][m] -= f * a[c][m];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = a[r][n];
        for (int m = r + 1; m < n; ++m) s -= a[r][m] * x[m];
        x[r] = s / a[r][r];
    }
    return x;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

}  // namespace

TEST_CASE("robin_neumann_column matches a dense solve of the same rows") {
    const int n3 = 13;
    const double dz = 1.0 / (n3 - 1);
    std::vector<double> rhs(n3);
    for (int k = 0; k < n3; ++k) rhs[k] = std::cos(0.7 * k) + 0.1 * k;
    for (auto [K, kappa] : {std::pair{0.0, 10.0}, std::pair{39.5, 0.0}, std::pair{158.0, 2.0}}) {
        std::vector<Complex> in(n3), out(n3);
        for (int k = 0; k < n3; ++k) in[k] = {rhs[k], -2.0 * rhs[k]};
        robin_neumann_column(in.data(), out.data(), 1, n3, dz, K, kappa);
        const auto ref = column_reference(rhs, dz, K, kappa);
        for (int k = 0; k < n3; ++k) {
            CHECK(out[k].real() == doctest::Approx(ref[k]).epsilon(1e-11));
            CHECK(out[k].imag() == doctest::Approx(-2.0 * ref[k]).epsilon(1e-11));
        }
    }
}

TEST_CASE("serial and parallel kernels agree") {
    const Grid g = Grid::make(16, 16, 17);
    const Spectral sp(g);
    const auto modes = BandModes::of(sp);
    const auto r = test::volume(g, [](double x, double y, double z) {
        return std::sin(test::kTwoPi * (x + 2 * y)) * z + std::cos(test::kTwoPi * 3 * y) * z * z;
    });
    const auto rhs = sp.forward(r);

    SUBCASE("robin_neumann_solve") {
        SpectralField a = rhs, b = rhs;
        serial::robin_neumann_solve(modes, rhs, a, g.dz(), 4.0);
        parallel::robin_neumann_solve(modes, rhs, b, g.dz(), 4.0);
        CHECK(max_diff(a, b) == 0.0);
    }
    SUBCASE("dense_solve") {
        const int n3 = g.n3;
        const double dz = g.dz();
        const DenseModeSolver solver(modes, n3, [&](double K) {
            std::vector<double> m(static_cast<std::size_t>(n3) * n3, 0.0);
            for (int k = 0; k < n3; ++k) {
                m[k * n3 + k] = -2 / (dz * dz) - K - 1.0;
                if (k > 0) m[k * n3 + k - 1] = 1 / (dz * dz);
                if (k < n3 - 1) m[k * n3 + k + 1] = 1 / (dz * dz);
            }
            return m;
        });
        SpectralField a = rhs, b = rhs;
        serial::dense_solve(modes, solver, rhs, a);
        parallel::dense_solve(modes, solver, rhs, b);
        CHECK(max_diff(a, b) == 0.0);
    }
    SUBCASE("ale_advection") {
        std::mt19937_64 rng(5);
        const auto w = test::random_surface(g, rng, 0.05);
        const auto geom = build_geometry(sp, w, 0.5 * w, 0.9);
        const Vec3Field v = {r, 2.0 * r, -1.0 * r};
        std::array<Vec3Field, 3> grad;
        for (int i = 0; i < 3; ++i) grad[i] = gradient(sp, v[i]);
        Vec3Field a = make_vec3(g), b = make_vec3(g);
        serial::ale_advection(v, grad, geom.E[2][0], geom.E[2][1], geom.E[2][2], geom.psi_t, a);
        parallel::ale_advection(v, grad, geom.E[2][0], geom.E[2][1], geom.E[2][2], geom.psi_t, b);
        for (int c = 0; c < 3; ++c) CHECK(test::max_diff(a[c], b[c]) == 0.0);
    }
}

TEST_CASE("thread limit round-trips") {
    const int before = thread_limit();
    set_thread_limit(1);
    CHECK(thread_limit() == 1);
    set_thread_limit(before);
}
