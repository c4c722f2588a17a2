#include "kch/geometry.hpp"
#include "kch/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>

using namespace kch;
using namespace kch::kernels;

namespace {

struct Fixture {
    Grid g;
    Spectral sp;
    BandModes modes;
    SpectralField rhs;
    Vec3Field v;
    std::array<Vec3Field, 3> grad;
    GeometryState geom;

    explicit Fixture(int n)
        : g(Grid::make(n, n, n + 1)), sp(g), modes(BandModes::of(sp)) {
        VolumeField r(g);
        for (std::size_t m = 0; m < r.size(); ++m) r[m] = std::sin(0.013 * static_cast<double>(m));
        rhs = sp.forward(r);
        v = {r, 0.5 * r, -1.0 * r};
        for (int i = 0; i < 3; ++i) grad[i] = gradient(sp, v[i]);
        SurfaceField w(g);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) w(i, j) = 0.01 * std::cos(2 * std::numbers::pi * g.x1(i));
        geom = build_geometry(sp, w, w, 0.9);
    }
};

Fixture& fixture(int n) {
    static std::unique_ptr<Fixture> f32, f64;
    auto& f = n == 32 ? f32 : f64;
    if (!f) f = std::make_unique<Fixture>(n);
    return *f;
}

template <bool Parallel>
void robin_neumann(benchmark::State& state) {
    auto& f = fixture(static_cast<int>(state.range(0)));
    SpectralField out = f.rhs;
    for (auto _ : state) {
        if constexpr (Parallel)
            parallel::robin_neumann_solve(f.modes, f.rhs, out, f.g.dz(), 10.0);
        else
            serial::robin_neumann_solve(f.modes, f.rhs, out, f.g.dz(), 10.0);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void dense(benchmark::State& state) {
    auto& f = fixture(static_cast<int>(state.range(0)));
    const int n3 = f.g.n3;
    const double dz = f.g.dz();
    static std::unique_ptr<DenseModeSolver> solvers[2];
    auto& solver = solvers[n3 > 40];
    if (!solver)
        solver = std::make_unique<DenseModeSolver>(f.modes, n3, [&](double K) {
            std::vector<double> m(static_cast<std::size_t>(n3) * n3, 0.0);
            for (int k = 0; k < n3; ++k) {
                m[k * n3 + k] = -2 / (dz * dz) - K - 1.0;
                if (k > 0) m[k * n3 + k - 1] = 1 / (dz * dz);
                if (k < n3 - 1) m[k * n3 + k + 1] = 1 / (dz * dz);
            }
            return m;
        });
    SpectralField out = f.rhs;
    for (auto _ : state) {
        if constexpr (Parallel)
            parallel::dense_solve(f.modes, *solver, f.rhs, out);
        else
            serial::dense_solve(f.modes, *solver, f.rhs, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void advection(benchmark::State& state) {
    auto& f = fixture(static_cast<int>(state.range(0)));
    Vec3Field out = make_vec3(f.g);
    const auto& E = f.geom.E;
    for (auto _ : state) {
        if constexpr (Parallel)
            parallel::ale_advection(f.v, f.grad, E[2][0], E[2][1], E[2][2], f.geom.psi_t, out);
        else
            serial::ale_advection(f.v, f.grad, E[2][0], E[2][1], E[2][2], f.geom.psi_t, out);
        benchmark::DoNotOptimize(out[0].data());
    }
}

}  // namespace

BENCHMARK(robin_neumann<false>)->Arg(32)->Arg(64)->Name("robin_neumann/serial");
BENCHMARK(robin_neumann<true>)->Arg(32)->Arg(64)->Name("robin_neumann/parallel");
BENCHMARK(dense<false>)->Arg(32)->Arg(64)->Name("dense_solve/serial");
BENCHMARK(dense<true>)->Arg(32)->Arg(64)->Name("dense_solve/parallel");
BENCHMARK(advection<false>)->Arg(32)->Arg(64)->Name("ale_advection/serial");
BENCHMARK(advection<true>)->Arg(32)->Arg(64)->Name("ale_advection/parallel");

BENCHMARK_MAIN();
