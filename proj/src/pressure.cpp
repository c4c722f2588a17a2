#include "kch/pressure.hpp"

#include "kch/advection.hpp"
#include "kch/errors.hpp"
#include "kch/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kch {

namespace {

double sup_minus_identity(const Mat3Field& d) {
    double s = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const double shift = r == c ? 1.0 : 0.0;
            for (std::size_t n = 0; n < d[r][c].size(); ++n) s = std::max(s, std::abs(d[r][c][n] - shift));
        }
    return s;
}

// Interior rows: D1 p1 + D2 p2 + D3 p3 (centred); wall rows: p3. Everything band-limited.
SpectralField flux_rows(const Spectral& sp, const Vec3Field& p) {
    const double dz = sp.grid().dz();
    auto s1 = sp.forward(p[0]);
    auto s2 = sp.forward(p[1]);
    auto s3 = sp.forward(p[2]);
    sp.apply_derivative(s1, 1, 0);
    sp.apply_derivative(s2, 0, 1);
    auto div = d3(s3, dz);
    div += s1;
    div += s2;
    const int top = s3.planes() - 1;
    for (std::size_t m = 0; m < s3.plane_size(); ++m) {
        div.plane(0)[m] = s3.plane(0)[m];
        div.plane(top)[m] = s3.plane(top)[m];
    }
    sp.dealias(div);
    return div;
}

// Rows of the constant-coefficient operator S0 applied to Q (spectral).
SpectralField base_rows(const Spectral& sp, const SpectralField& Q, double kappa) {
    const auto& g = sp.grid();
    const double dz = g.dz();
    SpectralField out = d33(Q, dz);  // interior rows of d33 are the compact stencil
    const auto dQ = d3(Q, dz);
    const int top = g.n3 - 1;
    for (int j = 0; j < g.n2; ++j) {
        for (int i = 0; i < g.nh(); ++i) {
            const double K = sp.laplacian_symbol(i, j);
            for (int k = 1; k < top; ++k) out(i, j, k) -= K * Q(i, j, k);
            out(i, j, 0) = dQ(i, j, 0);
            out(i, j, top) = dQ(i, j, top) + kappa * Q(i, j, top);
        }
    }
    return out;
}

// Rows of (A - S0) applied to Q.
SpectralField perturbation_rows(const Spectral& sp, const EllipticProblem& pb, const SpectralField& Q) {
    const double dz = sp.grid().dz();
    const VolumeField g1 = sp.to_volume(sp.derivative(Q, 1, 0));
    const VolumeField g2 = sp.to_volume(sp.derivative(Q, 0, 1));
    const VolumeField g3 = sp.to_volume(d3(Q, dz));
    Vec3Field p = make_vec3(sp.grid());
    const auto& d = pb.d;
    for (std::size_t n = 0; n < g1.size(); ++n) {
        const double grad[3] = {g1[n], g2[n], g3[n]};
        for (int r = 0; r < 3; ++r) {
            double acc = 0.0;
            for (int c = 0; c < 3; ++c) acc += (d[r][c][n] - (r == c ? 1.0 : 0.0)) * grad[c];
            p[r][n] = acc;
        }
    }
    return flux_rows(sp, p);
}

double sup_physical(const Spectral& sp, const SpectralField& s) { return sp.to_volume(s).max_abs(); }

}  // namespace

EllipticProblem identity_problem(const Grid& g, double kappa) {
    EllipticProblem pb;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) pb.d[r][c] = VolumeField(g, r == c ? 1.0 : 0.0);
    pb.f = make_vec3(g);
    pb.g1 = SurfaceField(g);
    pb.g0 = SurfaceField(g);
    pb.kappa = kappa;
    return pb;
}

EllipticProblem assemble_pressure_problem(const Spectral& sp, const Vec3Field& v, const GeometryState& geom,
                                          const SurfaceField& w, const SurfaceField& w_t, const PlateParams& params) {
    const auto& g = sp.grid();
    EllipticProblem pb = identity_problem(g, 1.0 / params.inertia());
    const auto& J = geom.J;
    const auto& F31 = geom.F[2][0];  // -D1 psi
    const auto& F32 = geom.F[2][1];  // -D2 psi
    for (std::size_t n = 0; n < J.size(); ++n) {
        pb.d[0][0][n] = J[n];
        pb.d[1][1][n] = J[n];
        pb.d[0][2][n] = pb.d[2][0][n] = F31[n];
        pb.d[1][2][n] = pb.d[2][1][n] = F32[n];
        pb.d[2][2][n] = (F31[n] * F31[n] + F32[n] * F32[n] + 1.0) / J[n];
    }
    pb.d_minus_I_sup = sup_minus_identity(pb.d);

    const auto A = advective_acceleration(sp, v, geom);
    const auto dpsit = gradient(sp, geom.psi_t);  // (-dt F31, -dt F32, dt J)
    for (std::size_t n = 0; n < J.size(); ++n) {
        pb.f[0][n] = dpsit[2][n] * v[0][n] - J[n] * A[0][n];
        pb.f[1][n] = dpsit[2][n] * v[1][n] - J[n] * A[1][n];
        pb.f[2][n] = -dpsit[0][n] * v[0][n] - dpsit[1][n] * v[1][n] - (F31[n] * A[0][n] + F32[n] * A[1][n] + A[2][n]);
    }
    for (auto& c : pb.f) c = sp.dealiased(c);

    // kappa (L_K w - nu Lap w_t) + f3 on the top, f3 on the bottom
    auto damping = sp.forward(w_t);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.nh(); ++i) damping(i, j) *= params.nu * sp.laplacian_symbol(i, j);
    SurfaceField load = elastic_operator(sp, w, params);
    load += sp.to_surface(damping);
    load *= pb.kappa;
    pb.g1 = load + pb.f[2].trace(g.n3 - 1);
    pb.g0 = pb.f[2].trace(0);
    return pb;
}

VolumeField apply_pressure_operator(const Spectral& sp, const EllipticProblem& pb, const VolumeField& q) {
    const auto Q = sp.forward(q);
    auto rows = base_rows(sp, Q, pb.kappa);
    rows += perturbation_rows(sp, pb, Q);
    return sp.to_volume(rows);
}

VolumeField pressure_rhs(const Spectral& sp, const EllipticProblem& pb) {
    auto rows = flux_rows(sp, pb.f);
    auto b0 = sp.forward(pb.g0);
    auto b1 = sp.forward(pb.g1);
    sp.dealias(b0);
    sp.dealias(b1);
    const int top = rows.planes() - 1;
    for (std::size_t m = 0; m < rows.plane_size(); ++m) {
        rows.plane(0)[m] = b0[m];
        rows.plane(top)[m] = b1[m];
    }
    return sp.to_volume(rows);
}

PressureSolution solve_robin_neumann(const Spectral& sp, const EllipticProblem& pb, const PressureConfig& cfg,
                                     const VolumeField* initial) {
    const auto& g = sp.grid();
    const double defect = pb.d_minus_I_sup > 0.0 ? pb.d_minus_I_sup : sup_minus_identity(pb.d);
    if (defect > cfg.radius) {
        std::ostringstream msg;
        msg << "pressure: |d - I| = " << defect << " exceeds the fixed-point radius " << cfg.radius
            << " (the coefficient must stay close to the identity for the Robin-Neumann iteration)";
        throw SmallnessError(msg.str());
    }
    const auto modes = kernels::BandModes::of(sp);
    const auto rhs = sp.forward(pressure_rhs(sp, pb));
    const double rhs_norm = sp.to_volume(rhs).max_abs();

    SpectralField Q = initial ? sp.forward(*initial) : SpectralField(g.n2, g.nh(), g.n3);
    if (initial) sp.dealias(Q);
    SpectralField delta(g.n2, g.nh(), g.n3);

    PressureSolution sol;
    double reference = initial ? initial->max_abs() : 0.0;
    double previous = 0.0;
    for (int it = 0; it < cfg.max_iter; ++it) {
        SpectralField r = rhs;
        r -= base_rows(sp, Q, pb.kappa);
        r -= perturbation_rows(sp, pb, Q);
        kernels::parallel::robin_neumann_solve(modes, r, delta, g.dz(), pb.kappa);
        Q += delta;
        const double step = sup_physical(sp, delta);
        reference = std::max(reference, sup_physical(sp, Q));
        const double rel = reference > 0.0 ? step / reference : 0.0;
        sol.updates.push_back(rel);
        if (it > 0 && previous > 0.0) sol.contraction = step / previous;
        previous = step;
        if (rel <= cfg.tol) break;
        if (it + 1 == cfg.max_iter) {
            std::ostringstream msg;
            msg << "pressure: no convergence in " << cfg.max_iter << " iterations (relative update " << rel
                << ", contraction ratio " << sol.contraction << ")";
            throw ConvergenceError(msg.str(), sol.contraction);
        }
    }
    sol.q = sp.to_volume(Q);
    SpectralField applied = base_rows(sp, Q, pb.kappa);
    applied += perturbation_rows(sp, pb, Q);
    SpectralField res = rhs;
    res -= applied;
    const double scale = std::max(rhs_norm, sp.to_volume(applied).max_abs());
    sol.residual = scale > 0.0 ? sp.to_volume(res).max_abs() / scale : 0.0;
    return sol;
}

double normalize_surface_mean(VolumeField& q) {
    const double c = q.trace(q.n3() - 1).mean();
    q += VolumeField(Grid{q.n1(), q.n2(), q.n3()}, -c);
    return c;
}

}  // namespace kch
