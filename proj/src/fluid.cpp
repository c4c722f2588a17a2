#include "kch/fluid.hpp"

#include "kch/advection.hpp"
#include "kch/errors.hpp"
#include "kch/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kch {

namespace {

// p_j = P(F_ji u_i)
Vec3Field normal_fluxes(const Spectral& sp, const Vec3Field& u, const GeometryState& geom) {
    Vec3Field p = make_vec3(sp.grid());
    const auto& J = geom.J;
    const auto& F31 = geom.F[2][0];
    const auto& F32 = geom.F[2][1];
    for (std::size_t n = 0; n < J.size(); ++n) {
        p[0][n] = J[n] * u[0][n];
        p[1][n] = J[n] * u[1][n];
        p[2][n] = F31[n] * u[0][n] + F32[n] * u[1][n] + u[2][n];
    }
    for (auto& c : p) c = sp.dealiased(c);
    return p;
}

// D1 p1 + D2 p2 + D3 p3 in spectral form (one-sided D3 on the wall planes).
SpectralField flux_divergence(const Spectral& sp, const Vec3Field& p) {
    auto s1 = sp.forward(p[0]);
    auto s2 = sp.forward(p[1]);
    sp.apply_derivative(s1, 1, 0);
    sp.apply_derivative(s2, 0, 1);
    auto div = d3(sp.forward(p[2]), sp.grid().dz());
    div += s1;
    div += s2;
    sp.dealias(div);
    return div;
}

// Projection rows: divergence inside, normal flux p3 on the walls.
SpectralField projection_rows(const Spectral& sp, const Vec3Field& p) {
    auto rows = flux_divergence(sp, p);
    auto s3 = sp.forward(p[2]);
    sp.dealias(s3);
    const int top = rows.planes() - 1;
    for (std::size_t m = 0; m < rows.plane_size(); ++m) {
        rows.plane(0)[m] = s3.plane(0)[m];
        rows.plane(top)[m] = s3.plane(top)[m];
    }
    return rows;
}

// u = P(E^T grad phi) for spectral phi.
Vec3Field e_gradient(const Spectral& sp, const SpectralField& phi, const GeometryState& geom) {
    const VolumeField g1 = sp.to_volume(sp.derivative(phi, 1, 0));
    const VolumeField g2 = sp.to_volume(sp.derivative(phi, 0, 1));
    const VolumeField g3 = sp.to_volume(d3(phi, sp.grid().dz()));
    Vec3Field u = {g1, g2, g3};
    for (std::size_t n = 0; n < g1.size(); ++n) {
        u[0][n] = g1[n] + geom.E[2][0][n] * g3[n];
        u[1][n] = g2[n] + geom.E[2][1][n] * g3[n];
        u[2][n] = geom.E[2][2][n] * g3[n];
    }
    for (auto& c : u) c = sp.dealiased(c);
    return u;
}

double interior_sup(const VolumeField& f) {
    double m = 0.0;
    for (int k = 1; k < f.n3() - 1; ++k)
        for (double x : f.plane(k)) m = std::max(m, std::abs(x));
    return m;
}

// Row-major n x n matrix of the flat projection operator for horizontal symbol K.
std::vector<double> flat_projection_matrix(int n, double dz, double K) {
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    auto D = [&](int r, int c) -> double& { return d[static_cast<std::size_t>(r) * n + c]; };
    const double c = 0.5 / dz;
    D(0, 0) = -3 * c;
    D(0, 1) = 4 * c;
    D(0, 2) = -c;
    D(n - 1, n - 1) = 3 * c;
    D(n - 1, n - 2) = -4 * c;
    D(n - 1, n - 3) = c;
    for (int k = 1; k < n - 1; ++k) {
        D(k, k - 1) = -c;
        D(k, k + 1) = c;
    }
    std::vector<double> a(d.size(), 0.0);
    for (int col = 0; col < n; ++col) {
        a[col] = d[col];
        a[static_cast<std::size_t>(n - 1) * n + col] = D(n - 1, col);
    }
    for (int k = 1; k < n - 1; ++k) {
        for (int col = 0; col < n; ++col) a[static_cast<std::size_t>(k) * n + col] = c * (D(k + 1, col) - D(k - 1, col));
        a[static_cast<std::size_t>(k) * n + k] -= K;
    }
    return a;
}

Vec3Field axpy(const Vec3Field& x, double s, const Vec3Field& y) {
    Vec3Field out = x;
    for (int i = 0; i < 3; ++i) out[i].axpy(s, y[i]);
    return out;
}

// Components of (D1 + e31 D3, D2 + e32 D3, e33 D3) f, indexed [component of f][direction].
std::array<Vec3Field, 3> ale_gradients(const Spectral& sp, const Vec3Field& f, const GeometryState& geom) {
    std::array<Vec3Field, 3> out;
    for (int i = 0; i < 3; ++i) {
        auto g = gradient(sp, f[i]);
        for (std::size_t n = 0; n < g[0].size(); ++n) {
            const double g3 = g[2][n];
            g[0][n] += geom.E[2][0][n] * g3;
            g[1][n] += geom.E[2][1][n] * g3;
            g[2][n] = geom.E[2][2][n] * g3;
        }
        out[i] = std::move(g);
    }
    return out;
}

Vec3Field vorticity_rhs(const Spectral& sp, const Vec3Field& theta, const Vec3Field& v, const GeometryState& geom) {
    std::array<Vec3Field, 3> gtheta;
    std::array<Vec3Field, 3> gv;
    for (int i = 0; i < 3; ++i) {
        gtheta[i] = gradient(sp, theta[i]);
        gv[i] = gradient(sp, v[i]);
    }
    const VolumeField still(sp.grid());
    Vec3Field adv = make_vec3(sp.grid());
    Vec3Field stretch = make_vec3(sp.grid());
    kernels::parallel::ale_advection(v, gtheta, geom.E[2][0], geom.E[2][1], geom.E[2][2], geom.psi_t, adv);
    kernels::parallel::ale_advection(theta, gv, geom.E[2][0], geom.E[2][1], geom.E[2][2], still, stretch);
    for (int i = 0; i < 3; ++i) {
        stretch[i] -= adv[i];
        stretch[i] = sp.dealiased(stretch[i]);
    }
    return stretch;
}

}  // namespace

Vec3Field momentum_rhs(const Spectral& sp, const Vec3Field& v, const VolumeField& q, const GeometryState& geom) {
    Vec3Field out = advective_acceleration(sp, v, geom);
    const auto gq = transposed_gradient(sp, q, geom);
    for (int i = 0; i < 3; ++i) {
        out[i] += gq[i];
        out[i] *= -1.0;
    }
    return out;
}

StageEval evaluate_stage(const Spectral& sp, const Vec3Field& v, const StageFrame& frame, const PlateParams& params,
                         const FluidConfig& cfg, const VolumeField* q_guess) {
    const auto pb = assemble_pressure_problem(sp, v, *frame.geom, *frame.w, *frame.w_t, params);
    auto sol = solve_robin_neumann(sp, pb, cfg.pressure, q_guess);
    StageEval out;
    out.rhs = momentum_rhs(sp, v, sol.q, *frame.geom);
    out.pressure_iterations = sol.iterations();
    out.pressure_residual = sol.residual;
    out.q = std::move(sol.q);
    return out;
}

void impose_boundary_conditions(Vec3Field& v, const GeometryState& geom, const SurfaceField& w_t) {
    const int top = v[2].n3() - 1;
    for (double& x : v[2].plane(0)) x = 0.0;
    const auto F31 = geom.F[2][0].plane(top);
    const auto F32 = geom.F[2][1].plane(top);
    const auto v1 = v[0].plane(top);
    const auto v2 = v[1].plane(top);
    auto v3 = v[2].plane(top);
    for (std::size_t m = 0; m < v3.size(); ++m) v3[m] = w_t[m] - F31[m] * v1[m] - F32[m] * v2[m];
}

double interface_residual(const Vec3Field& v, const GeometryState& geom, const SurfaceField& w_t) {
    const int top = v[2].n3() - 1;
    const auto F31 = geom.F[2][0].plane(top);
    const auto F32 = geom.F[2][1].plane(top);
    double worst = 0.0;
    for (std::size_t m = 0; m < w_t.size(); ++m) {
        const double flux = F31[m] * v[0].plane(top)[m] + F32[m] * v[1].plane(top)[m] + v[2].plane(top)[m];
        worst = std::max(worst, std::abs(flux - w_t[m]));
    }
    return worst;
}

VolumeField ale_divergence(const Spectral& sp, const Vec3Field& v, const GeometryState& geom) {
    auto div = sp.to_volume(flux_divergence(sp, normal_fluxes(sp, v, geom)));
    for (std::size_t n = 0; n < div.size(); ++n) div[n] /= geom.J[n];
    return div;
}

double divergence_monitor(const Spectral& sp, const Vec3Field& v, const GeometryState& geom) {
    return interior_sup(ale_divergence(sp, v, geom));
}

double cfl_number(const Spectral& sp, const Vec3Field& v, const GeometryState& geom, double dt) {
    const auto& g = sp.grid();
    const double dx1 = 1.0 / g.n1;
    const double dx2 = 1.0 / g.n2;
    const double dz = g.dz();
    double worst = 0.0;
    for (std::size_t n = 0; n < v[0].size(); ++n) {
        const double w3 = geom.E[2][0][n] * v[0][n] + geom.E[2][1][n] * v[1][n] +
                          geom.E[2][2][n] * (v[2][n] - geom.psi_t[n]);
        worst = std::max(worst, std::abs(v[0][n]) / dx1 + std::abs(v[1][n]) / dx2 + std::abs(w3) / dz);
    }
    return worst * dt;
}

Projector::Projector(const Spectral& sp)
    : sp_(sp),
      modes_(kernels::BandModes::of(sp)),
      flat_(modes_, sp.grid().n3,
            [n = sp.grid().n3, dz = sp.grid().dz()](double K) { return flat_projection_matrix(n, dz, K); }) {}

Projector::Result Projector::apply(Vec3Field& v, const GeometryState& geom, double tol, int max_iter) const {
    const auto& g = sp_.grid();
    Result res;
    auto rhs = projection_rows(sp_, normal_fluxes(sp_, v, geom));
    const int top = g.n3 - 1;
    for (std::size_t m = 0; m < rhs.plane_size(); ++m) rhs.plane(0)[m] = rhs.plane(top)[m] = 0.0;
    const double rhs_norm = sp_.to_volume(rhs).max_abs();
    res.divergence_before = rhs_norm;
    // Divergences are measured against the size of a first derivative of v.
    double vmax = 0.0;
    for (const auto& c : v) vmax = std::max(vmax, c.max_abs());
    const double scale = vmax * std::max({static_cast<double>(g.n1), static_cast<double>(g.n2), 1.0 / g.dz()});
    if (rhs_norm <= tol * scale) return res;

    SpectralField phi(g.n2, g.nh(), g.n3);
    SpectralField delta(g.n2, g.nh(), g.n3);
    double previous = rhs_norm;
    for (int it = 0; it < max_iter; ++it) {
        SpectralField r = rhs;
        if (it > 0) r -= projection_rows(sp_, normal_fluxes(sp_, e_gradient(sp_, phi, geom), geom));
        const double rn = sp_.to_volume(r).max_abs();
        if (rn <= tol * scale) break;
        // stagnation at roundoff
        if (it > 1 && rn > 0.5 * previous && rn <= 1e-9 * scale) break;
        if (it + 1 == max_iter) {
            std::ostringstream msg;
            msg << "projection: residual " << rn / scale << " (relative to max|v|/dx) after " << max_iter
                << " iterations";
            throw ConvergenceError(msg.str(), rn / previous);
        }
        previous = rn;
        kernels::parallel::dense_solve(modes_, flat_, r, delta);
        phi += delta;
        res.iterations = it + 1;
    }
    const auto u = e_gradient(sp_, phi, geom);
    for (int i = 0; i < 3; ++i) v[i] -= u[i];
    res.divergence_after = interior_sup(sp_.to_volume(flux_divergence(sp_, normal_fluxes(sp_, v, geom))));
    return res;
}

FluidStepResult fluid_step(const Spectral& sp, const Projector& projector, const FluidState& state,
                           const StageFrame& start, const StageFrame& mid, const StageFrame& end,
                           const PlateParams& params, const FluidConfig& cfg, double dt,
                           const StageEval* cached_start, const VolumeField* mid_guess) {
    if (!(dt > 0.0)) throw NumericsError("fluid_step: dt must be > 0");
    const double cfl = cfl_number(sp, state.v, *start.geom, dt);
    if (cfl > cfg.cfl_max) {
        const double suggested = 0.9 * dt * cfg.cfl_max / cfl;
        std::ostringstream msg;
        msg << "CFL number " << cfl << " exceeds cfl_max = " << cfg.cfl_max << "; try dt <= " << suggested;
        throw CflError(msg.str(), cfl, suggested);
    }
    StageEval first;
    if (!cached_start) first = evaluate_stage(sp, state.v, start, params, cfg, &state.q);
    const StageEval& s0 = cached_start ? *cached_start : first;

    FluidStepResult out;
    out.v_mid = axpy(state.v, 0.5 * dt, s0.rhs);
    impose_boundary_conditions(out.v_mid, *mid.geom, *mid.w_t);
    out.stage_mid = evaluate_stage(sp, out.v_mid, mid, params, cfg, mid_guess ? mid_guess : &s0.q);

    Vec3Field v = axpy(state.v, dt, out.stage_mid.rhs);
    impose_boundary_conditions(v, *end.geom, *end.w_t);
    if (cfg.divergence_cleanup) {
        out.projection = projector.apply(v, *end.geom, cfg.projection_tol, cfg.projection_max_iter);
        impose_boundary_conditions(v, *end.geom, *end.w_t);
    }
    for (const auto& c : v)
        if (!c.all_finite()) throw NumericsError("fluid_step: non-finite velocity");
    out.state.v = std::move(v);
    out.state.q = out.stage_mid.q;
    normalize_surface_mean(out.state.q);
    out.state.t = state.t + dt;
    return out;
}

Vec3Field ale_vorticity(const Spectral& sp, const Vec3Field& v, const GeometryState& geom) {
    const auto g = ale_gradients(sp, v, geom);  // g[k][j] = nabla^E_j v_k
    Vec3Field z = make_vec3(sp.grid());
    for (std::size_t n = 0; n < z[0].size(); ++n) {
        z[0][n] = g[2][1][n] - g[1][2][n];
        z[1][n] = g[0][2][n] - g[2][0][n];
        z[2][n] = g[1][0][n] - g[0][1][n];
    }
    for (auto& c : z) c = sp.dealiased(c);
    return z;
}

VorticityState vorticity_transport_step(const Spectral& sp, const VorticityState& vort, const Vec3Field& v_start,
                                        const GeometryState& geom_start, const Vec3Field& v_mid,
                                        const GeometryState& geom_mid, const Vec3Field& v_end,
                                        const GeometryState& geom_end, double dt) {
    const auto k1 = vorticity_rhs(sp, vort.theta, v_start, geom_start);
    const auto theta_mid = axpy(vort.theta, 0.5 * dt, k1);
    const auto k2 = vorticity_rhs(sp, theta_mid, v_mid, geom_mid);
    VorticityState out;
    out.theta = axpy(vort.theta, dt, k2);
    out.zeta = ale_vorticity(sp, v_end, geom_end);
    return out;
}

double vector_proxy(const Spectral& sp, const Vec3Field& v, double s, int vertical_order) {
    double sum = 0.0;
    for (const auto& c : v) {
        const double p = sobolev_proxy(sp, c, s, vertical_order);
        sum += p * p;
    }
    return std::sqrt(sum);
}

DivCurlNorms divcurl_norms(const Spectral& sp, const Vec3Field& v, const GeometryState& geom) {
    DivCurlNorms out;
    out.curl_norm = vector_proxy(sp, ale_vorticity(sp, v, geom), 2.5, 2);
    out.div_norm = sobolev_proxy(sp, ale_divergence(sp, v, geom), 2.5, 2);
    const int top = v[0].n3() - 1;
    SurfaceField normal_top = v[2].trace(top);
    normal_top += product(geom.F[2][0].trace(top), v[0].trace(top));
    normal_top += product(geom.F[2][1].trace(top), v[1].trace(top));
    const double t1 = sobolev_proxy(sp, normal_top, 3.0);
    const double t0 = sobolev_proxy(sp, v[2].trace(0), 3.0);
    out.trace_norm = std::sqrt(t0 * t0 + t1 * t1);
    double l2 = 0.0;
    for (const auto& c : v) l2 += volume_integral(product(c, c));
    out.l2_norm = std::sqrt(l2);
    out.h35_proxy = vector_proxy(sp, v, 3.5, 2);
    return out;
}

}  // namespace kch
