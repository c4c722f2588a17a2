#include "kch/coupling.hpp"

#include "kch/errors.hpp"
#include "kch/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kch {

namespace {

double band_defect(const Spectral& sp, const PlaneStack& f) {
    if (!f.all_finite()) return std::numeric_limits<double>::infinity();
    auto s = sp.forward(f);
    sp.dealias(s);
    PlaneStack filtered = f;
    sp.inverse(s, filtered);
    double worst = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) worst = std::max(worst, std::abs(f[n] - filtered[n]));
    return worst;
}

double vec_l2(const Vec3Field& v) {
    double s = 0.0;
    for (const auto& c : v) s += volume_integral(product(c, c));
    return std::sqrt(s);
}

double plate_h2(const Spectral& sp, const SurfaceField& w, const SurfaceField& w_t) {
    const double a = sobolev_proxy(sp, w, 2.0);
    const double b = sobolev_proxy(sp, w_t, 2.0);
    return std::sqrt(a * a + b * b);
}

SurfaceField zero_mean_trace(const VolumeField& q) {
    SurfaceField top = q.trace(q.n3() - 1);
    top += SurfaceField(top.n1(), top.n2(), -top.mean());
    return top;
}

GeometryState frame(const Spectral& sp, const SurfaceField& w, const SurfaceField& w_t, const SolverConfig& cfg,
                    const char* where) {
    auto geom = build_geometry(sp, w, w_t, cfg.epsilon, cfg.c_min);
    if (!geom.smallness.within) {
        const auto& s = geom.smallness;
        std::ostringstream msg;
        msg << "geometry left the small-perturbation regime at the " << where << " frame: |E-I| = " << s.E_minus_I_sup
            << ", |F-I| = " << s.F_minus_I_sup << ", |J-1| = " << s.J_minus_1_sup << " (epsilon = " << cfg.epsilon
            << "); reduce dt or the data amplitude";
        throw SmallnessError(msg.str());
    }
    return geom;
}

PlateState relax(const PlateState& candidate, const PlateState& previous, double omega) {
    if (omega == 1.0) return candidate;
    PlateState out = candidate;
    out.w *= omega;
    out.w.axpy(1.0 - omega, previous.w);
    out.w_t *= omega;
    out.w_t.axpy(1.0 - omega, previous.w_t);
    return out;
}

}  // namespace

bool CompatibilityReport::all_passed() const {
    return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.passed; });
}

std::string CompatibilityReport::summary() const {
    std::ostringstream out;
    out.precision(3);
    for (const auto& i : items)
        out << (i.passed ? "  pass  " : "  FAIL  ") << i.name << "  residual " << std::scientific << i.residual << '\n';
    return out.str();
}

CompatibilityReport check_compatibility(const Spectral& sp, const Vec3Field& v0, const SurfaceField& w0,
                                        const SurfaceField& w1, double tol) {
    const auto& g = sp.grid();
    CompatibilityReport r;
    r.tol = tol;
    double reg = std::max(band_defect(sp, w0), band_defect(sp, w1));
    for (const auto& c : v0) reg = std::max(reg, band_defect(sp, c));
    r.items[0] = {"regularity", reg};
    r.items[1] = {"initial_displacement", w0.all_finite() ? w0.max_abs() : std::numeric_limits<double>::infinity()};
    r.items[2] = {"plate_velocity_mean", std::abs(w1.mean())};
    r.items[3] = {"divergence", reg < std::numeric_limits<double>::infinity()
                                    ? divergence_monitor(sp, v0, flat_geometry(sp))
                                    : std::numeric_limits<double>::infinity()};
    r.items[4] = {"bottom_normal_velocity", v0[2].trace(0).max_abs()};
    r.items[5] = {"interface_velocity", (w1 - v0[2].trace(g.n3 - 1)).max_abs()};
    for (auto& i : r.items) i.passed = i.residual <= tol;
    return r;
}

void require_compatible(const CompatibilityReport& report) {
    if (report.all_passed()) return;
    std::ostringstream msg;
    msg << "initial data fail the compatibility conditions (tol " << report.tol << "):";
    for (const auto& i : report.items)
        if (!i.passed) msg << ' ' << i.name << " = " << i.residual << ';';
    throw CompatibilityError(msg.str());
}

SystemState initial_state(const Spectral& sp, const InitialData& data, const SolverConfig& cfg) {
    SystemState s;
    s.plate.w = data.w0;
    s.plate.w_t = data.w1;
    s.geom = frame(sp, data.w0, data.w1, cfg, "initial");
    s.fluid.v = data.v0;
    const auto pb = assemble_pressure_problem(sp, s.fluid.v, s.geom, s.plate.w, s.plate.w_t, cfg.plate);
    s.fluid.q = solve_robin_neumann(sp, pb, cfg.fluid.pressure).q;
    normalize_surface_mean(s.fluid.q);
    return s;
}

double PicardLog::max_ratio() const {
    double r = 0.0;
    for (std::size_t n = 1; n < iterates.size(); ++n)
        if (iterates[n - 1].W > 0.0) r = std::max(r, iterates[n].W / iterates[n - 1].W);
    return r;
}

PicardResult picard_timestep(const Spectral& sp, const Projector& projector, const SystemState& state,
                             const SolverConfig& cfg, double dt) {
    const auto& pc = cfg.picard;
    const PlateState& p0 = state.plate;
    const StageFrame start{&state.geom, &p0.w, &p0.w_t};
    const StageEval s0 = evaluate_stage(sp, state.fluid.v, start, cfg.plate, cfg.fluid, &state.fluid.q);

    PlateState plate = plate_step(sp, p0, zero_mean_trace(state.fluid.q), cfg.plate, dt);
    Vec3Field v_prev = state.fluid.v;
    VolumeField q_prev = state.fluid.q;

    PicardResult out;
    VolumeField q_mid;  // Robin-pinned midpoint pressure of the previous iterate
    for (int it = 0; it < pc.max_iter; ++it) {
        SurfaceField w_mid = p0.w + plate.w;
        w_mid *= 0.5;
        SurfaceField wt_mid = p0.w_t + plate.w_t;
        wt_mid *= 0.5;
        GeometryState geom_mid = frame(sp, w_mid, wt_mid, cfg, "midpoint");
        GeometryState geom_end = frame(sp, plate.w, plate.w_t, cfg, "end-of-step");

        auto fl = fluid_step(sp, projector, state.fluid, start, {&geom_mid, &w_mid, &wt_mid},
                             {&geom_end, &plate.w, &plate.w_t}, cfg.plate, cfg.fluid, dt, &s0,
                             it > 0 ? &q_mid : nullptr);
        const PlateState next = relax(plate_step(sp, p0, zero_mean_trace(fl.state.q), cfg.plate, dt), plate,
                                      pc.relaxation);

        PicardIterate d;
        Vec3Field dv = fl.state.v;
        for (int i = 0; i < 3; ++i) dv[i] -= v_prev[i];
        d.V = vec_l2(dv) / std::max(vec_l2(fl.state.v), pc.floor);
        d.Q = l2_norm(fl.state.q - q_prev) / std::max(l2_norm(fl.state.q), pc.floor);
        d.W = plate_h2(sp, next.w - plate.w, next.w_t - plate.w_t) /
              std::max(plate_h2(sp, next.w, next.w_t), pc.floor);
        out.log.iterates.push_back(d);

        if (d.V <= pc.tol && d.Q <= pc.tol && d.W <= pc.tol) {
            out.log.converged = true;
            out.state.plate = plate;  // the iterate the frames and the fluid step were built from
            out.state.plate.t = state.t + dt;
            out.state.fluid = std::move(fl.state);
            out.state.geom = std::move(geom_end);
            out.state.t = state.t + dt;
            out.v_mid = std::move(fl.v_mid);
            out.geom_mid = std::move(geom_mid);
            out.pressure_iterations = s0.pressure_iterations + fl.stage_mid.pressure_iterations;
            out.projection = fl.projection;
            return out;
        }
        q_mid = std::move(fl.stage_mid.q);
        v_prev = std::move(fl.state.v);
        q_prev = std::move(fl.state.q);
        plate = next;
    }
    std::ostringstream msg;
    const auto& last = out.log.iterates.back();
    msg << "Picard iteration did not converge in " << pc.max_iter << " iterations at t = " << state.t
        << " (V = " << last.V << ", Q = " << last.Q << ", W = " << last.W << ", ratio " << out.log.max_ratio() << ")";
    throw ConvergenceError(msg.str(), out.log.max_ratio());
}

int TimeConfig::steps() const {
    if (!(dt > 0.0) || !(t_final >= 0.0)) throw ConfigError("time: dt must be > 0 and T_final >= 0");
    return static_cast<int>(std::llround(t_final / dt));
}

RunResult run_simulation(const Spectral& sp, const SystemState& initial, const SolverConfig& cfg,
                         const TimeConfig& time, const OutputObserver& on_output, const StepObserver& on_step) {
    RunResult result;
    const int steps = time.steps();
    const int every = std::max(1, time.output_every);
    const Projector projector(sp);
    SystemState state = initial;

    auto emit = [&](const SystemState& s) {
        OutputRow row{s.t, energy_report(sp, s, cfg.plate)};
        result.max_interface_residual = std::max(result.max_interface_residual, row.report.interface_residual);
        if (on_output) on_output(row, s);
        result.rows.push_back(row);
    };
    emit(state);

    for (int n = 1; n <= steps; ++n) {
        try {
            auto step = picard_timestep(sp, projector, state, cfg, time.dt);
            result.max_picard_iterations = std::max(result.max_picard_iterations, step.log.iterations());
            result.max_picard_ratio = std::max(result.max_picard_ratio, step.log.max_ratio());
            result.max_divergence = std::max(result.max_divergence, step.projection.divergence_after);
            if (cfg.plate.nu > 0.0) {
                SurfaceField wt_mid = state.plate.w_t + step.state.plate.w_t;
                wt_mid *= 0.5;
                const double g1 = l2_norm(sp.derivative(wt_mid, 1, 0));
                const double g2 = l2_norm(sp.derivative(wt_mid, 0, 1));
                result.dissipated += cfg.plate.nu * time.dt * (g1 * g1 + g2 * g2);
            }
            if (on_step) on_step(n, step);
            state = std::move(step.state);
        } catch (const Error& e) {
            result.ok = false;
            result.failure = e.what();
            result.exit_code = e.exit_code();
            result.trip_time = state.t;
            break;
        }
        result.steps = n;
        if (n % every == 0 || n == steps) emit(state);
    }
    result.final_state = std::move(state);
    return result;
}

SweepResult nu_sweep(const Spectral& sp, const InitialData& data, const SolverConfig& cfg, const TimeConfig& time,
                     const std::vector<double>& nu_list) {
    SweepResult out;
    for (double nu : nu_list) {
        SweepRow row;
        row.nu = nu;
        SolverConfig c = cfg;
        c.plate.nu = nu;
        try {
            const auto result = run_simulation(sp, initial_state(sp, data, c), c, time);
            row.ok = result.ok;
            row.failure = result.failure;
            for (const auto& r : result.rows) {
                const auto vals = r.report.values();
                for (std::size_t k = 0; k < vals.size(); ++k) row.max_values[k] = std::max(row.max_values[k], vals[k]);
            }
        } catch (const Error& e) {
            row.ok = false;
            row.failure = e.what();
        }
        out.rows.push_back(row);
    }
    for (std::size_t k = 0; k < NormReport::kCount; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const auto& r : out.rows) {
            if (!r.ok) continue;
            lo = std::min(lo, r.max_values[k]);
            hi = std::max(hi, r.max_values[k]);
        }
        if (hi == 0.0)
            out.spread[k] = 1.0;
        else
            out.spread[k] = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace kch
