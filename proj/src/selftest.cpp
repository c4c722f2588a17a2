#include "kch/selftest.hpp"

#include "kch/coupling.hpp"
#include "kch/io.hpp"
#include "kch/kernels.hpp"
#include "kch/norms.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace kch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string sci(double x) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << x;
    return s.str();
}

SurfaceField random_surface(const Grid& g, std::mt19937_64& rng, double amp) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SurfaceField f(g);
    for (int k1 = -2; k1 <= 2; ++k1)
        for (int k2 = -2; k2 <= 2; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double a = u(rng), b = u(rng);
            const double damp = amp / (1.0 + k1 * k1 + k2 * k2);
            for (int j = 0; j < g.n2; ++j)
                for (int i = 0; i < g.n1; ++i) {
                    const double ph = kTwoPi * (k1 * g.x1(i) + k2 * g.x2(j));
                    f(i, j) += damp * (a * std::cos(ph) + b * std::sin(ph));
                }
        }
    return f;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (int k = 0; k < a.planes(); ++k) {
        const auto pa = a.plane(k);
        const auto pb = b.plane(k);
        for (std::size_t n = 0; n < pa.size(); ++n) m = std::max(m, std::abs(pa[n] - pb[n]));
    }
    return m;
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const std::function<void(const SelftestCheck&)>& on_check) {
    std::vector<SelftestCheck> out;
    auto record = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
        if (on_check) on_check(out.back());
    };
    auto guarded = [&](const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            record(name, false, std::string("threw: ") + e.what());
        }
    };

    const Grid g = Grid::make(16, 16, 17);
    const Spectral sp(g);
    std::mt19937_64 rng(20240601);

    guarded("geometry_identities", [&] {
        const auto w = random_surface(g, rng, 0.05);
        const auto geom = build_geometry(sp, w, SurfaceField(g), 0.9);
        const double inv = inverse_identity_residual(sp, geom);
        const double cof = cofactor_residual(geom);
        record("geometry_identities", inv <= 1e-12 && cof <= 1e-12, "inverse " + sci(inv) + ", cofactor " + sci(cof));
    });

    guarded("sobolev_proxy_single_mode", [&] {
        SurfaceField f(g);
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) f(i, j) = std::cos(kTwoPi * g.x1(i));
        const double got = sobolev_proxy(sp, f, 1.0);
        const double want = std::sqrt((1.0 + kTwoPi * kTwoPi) * 0.5);
        const double err = std::abs(got - want) / want;
        record("sobolev_proxy_single_mode", err <= 1e-12, "relative error " + sci(err));
    });

    guarded("koiter_gradient", [&] {
        double worst = 0.0;
        PlateParams p;
        for (auto model : {CurvatureModel::NonNormalized, CurvatureModel::Normalized}) {
            p.curvature = model;
            const auto w = random_surface(g, rng, 0.01);
            const auto xi = random_surface(g, rng, 0.01);
            worst = std::max(worst, energy_gradient_check(sp, w, xi, p, 1e-5));
        }
        record("koiter_gradient", worst <= 1e-5, "worst relative mismatch " + sci(worst));
    });

    guarded("bending_symbol", [&] {
        PlateParams p;
        SurfaceField w(g), want(g);
        const double c = p.h * p.h * p.h / 24.0 * (p.c1() + 4.0 * p.mu) * std::pow(kTwoPi, 4);
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) {
                w(i, j) = std::cos(kTwoPi * g.x1(i));
                want(i, j) = c * w(i, j);
            }
        const double err = (bending_operator(sp, w, p) - want).max_abs() / want.max_abs();
        record("bending_symbol", err <= 1e-12, "relative error " + sci(err));
    });

    guarded("pressure_identity_solve", [&] {
        auto pb = identity_problem(g, 10.0);
        pb.g1 = random_surface(g, rng, 1.0);
        pb.g0 = random_surface(g, rng, 1.0);
        const auto sol = solve_robin_neumann(sp, pb, PressureConfig{});
        record("pressure_identity_solve", sol.residual <= 1e-9,
               "residual " + sci(sol.residual) + " after " + std::to_string(sol.iterations()) + " iterations");
    });

    guarded("plate_energy", [&] {
        PlateParams p;
        PlateState s{random_surface(g, rng, 0.01), SurfaceField(g), 0.0};
        const SurfaceField q(g);
        const double e0 = plate_energy(sp, s, p);
        double drift = 0.0;
        for (int n = 0; n < 100; ++n) {
            s = plate_step(sp, s, q, p, 1e-2);
            drift = std::max(drift, std::abs(plate_energy(sp, s, p) - e0));
        }
        const double rel = drift / e0;
        record("plate_energy", rel <= 1e-3 && std::abs(s.w_t.mean()) <= 1e-13, "relative drift " + sci(rel));
    });

    guarded("preset_compatibility", [&] {
        std::string failed;
        for (const auto& name : preset_names()) {
            PresetParams pp;
            pp.name = name;
            const auto d = make_initial_data(sp, pp);
            if (!check_compatibility(sp, d.v0, d.w0, d.w1).all_passed()) failed += " " + name;
        }
        record("preset_compatibility", failed.empty(), failed.empty() ? "all presets pass" : "failed:" + failed);
    });

    guarded("serial_parallel_kernels", [&] {
        const auto modes = kernels::BandModes::of(sp);
        VolumeField r(g);
        for (std::size_t n = 0; n < r.size(); ++n) r[n] = std::sin(0.37 * static_cast<double>(n));
        const auto rhs = sp.forward(r);
        SpectralField a = rhs, b = rhs;
        kernels::serial::robin_neumann_solve(modes, rhs, a, g.dz(), 3.0);
        kernels::parallel::robin_neumann_solve(modes, rhs, b, g.dz(), 3.0);
        const double d = max_diff(a, b);
        record("serial_parallel_kernels", d == 0.0, "max difference " + sci(d));
    });

    guarded("snapshot_round_trip", [&] {
        PresetParams pp;
        pp.name = "random_bandlimited";
        SolverConfig cfg;
        const auto state = initial_state(sp, make_initial_data(sp, pp), cfg);
        std::ostringstream first;
        write_snapshot(first, snapshot_of(state));
        std::istringstream in(first.str());
        std::ostringstream second;
        write_snapshot(second, read_snapshot(in));
        record("snapshot_round_trip", first.str() == second.str(), std::to_string(first.str().size()) + " bytes");
    });

    guarded("coupled_run", [&] {
        PresetParams pp;
        pp.name = "single_mode_plate";
        SolverConfig cfg;
        TimeConfig tc;
        tc.dt = 1e-3;
        tc.t_final = 1e-2;
        tc.output_every = 5;
        const auto data = make_initial_data(sp, pp);
        const auto res = run_simulation(sp, initial_state(sp, data, cfg), cfg, tc);
        const bool ok = res.ok && res.max_picard_iterations <= 15 && res.max_interface_residual <= 1e-8;
        record("coupled_run", ok,
               res.ok ? "max Picard iterations " + std::to_string(res.max_picard_iterations) + ", interface residual " +
                            sci(res.max_interface_residual)
                      : res.failure);
    });

    return out;
}

}  // namespace kch
