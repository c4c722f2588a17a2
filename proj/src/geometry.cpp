#include "kch/geometry.hpp"

#include "kch/errors.hpp"
#include "kch/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kch {

namespace {

// sinh(a x) / sinh(a) written with decaying exponentials only, so it stays
// finite (and monotone in x) for any a > 0.
double sinh_ratio(double a, double x) {
    return std::exp(a * (x - 1.0)) * (-std::expm1(-2.0 * a * x)) / (-std::expm1(-2.0 * a));
}

VolumeField extend(const Spectral& sp, const SurfaceField& top, double mean_shift) {
    const auto& g = sp.grid();
    if (!top.all_finite()) throw NumericsError("harmonic_extension: non-finite surface data");
    const auto s = sp.forward(top);
    SpectralField out(g.n2, g.nh(), g.n3);
    for (int j = 0; j < g.n2; ++j) {
        for (int i = 0; i < g.nh(); ++i) {
            const Complex c = s(i, j);
            if (i == 0 && j == 0) {
                for (int k = 0; k < g.n3; ++k) out(0, 0, k) = (mean_shift + c) * g.x3(k);
                continue;
            }
            const double a = std::sqrt(sp.wave_norm_sq(i, j));
            for (int k = 0; k < g.n3; ++k) out(i, j, k) = c * sinh_ratio(a, g.x3(k));
        }
    }
    return sp.to_volume(out);
}

Mat3Field make_mat3(const Grid& g) {
    Mat3Field m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m[r][c] = VolumeField(g, r == c ? 1.0 : 0.0);
    return m;
}

double sup_minus_identity(const Mat3Field& m) {
    double s = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const auto& f = m[r][c];
            const double shift = r == c ? 1.0 : 0.0;
            for (std::size_t n = 0; n < f.size(); ++n) s = std::max(s, std::abs(f[n] - shift));
        }
    return s;
}

double proxy_minus_identity(const Spectral& sp, const Mat3Field& m, double s) {
    double sum = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            VolumeField f = m[r][c];
            if (r == c) f += VolumeField(sp.grid(), -1.0);
            const double p = sobolev_proxy(sp, f, s, 2);
            sum += p * p;
        }
    return std::sqrt(sum);
}

}  // namespace

VolumeField harmonic_extension(const Spectral& sp, const SurfaceField& w) { return extend(sp, w, 1.0); }

VolumeField velocity_extension(const Spectral& sp, const SurfaceField& w_t) { return extend(sp, w_t, 0.0); }

GeometryState ale_matrices(const Spectral& sp, const VolumeField& psi, double c_min) {
    const auto& g = sp.grid();
    GeometryState geom;
    geom.psi = psi;
    geom.psi_t = VolumeField(g);
    const auto grad = gradient(sp, psi);
    geom.J = grad[2];

    std::size_t worst = 0;
    for (std::size_t n = 0; n < geom.J.size(); ++n)
        if (geom.J[n] < geom.J[worst] || !std::isfinite(geom.J[n])) worst = n;
    if (!(geom.J[worst] > c_min)) {
        const int i = static_cast<int>(worst % g.n1);
        const int j = static_cast<int>((worst / g.n1) % g.n2);
        const int k = static_cast<int>(worst / g.plane_size());
        std::ostringstream msg;
        msg << "nondegeneracy violated: J = d3 psi = " << geom.J[worst] << " <= c_min = " << c_min << " at node (" << i
            << ", " << j << ", " << k << ")";
        throw NondegeneracyError(msg.str(), i, j, k, geom.J[worst]);
    }

    // Pointwise quotients are left unfiltered so that grad(eta) E = I holds node by node.
    geom.E = make_mat3(g);
    geom.F = make_mat3(g);
    for (std::size_t n = 0; n < psi.size(); ++n) {
        const double J = geom.J[n];
        geom.E[2][0][n] = -grad[0][n] / J;
        geom.E[2][1][n] = -grad[1][n] / J;
        geom.E[2][2][n] = 1.0 / J;
        geom.F[0][0][n] = J;
        geom.F[1][1][n] = J;
        geom.F[2][0][n] = -grad[0][n];
        geom.F[2][1][n] = -grad[1][n];
    }
    return geom;
}

GeometryState build_geometry(const Spectral& sp, const SurfaceField& w, const SurfaceField& w_t, double epsilon,
                             double c_min) {
    auto geom = ale_matrices(sp, harmonic_extension(sp, w), c_min);
    geom.psi_t = velocity_extension(sp, w_t);
    geom.smallness = smallness_report(sp, geom, epsilon, false);
    return geom;
}

GeometryState flat_geometry(const Spectral& sp) {
    const SurfaceField zero(sp.grid());
    return build_geometry(sp, zero, zero, 1.0);
}

std::array<double, 3> piola_residual(const Spectral& sp, const Mat3Field& F) {
    const double dz = sp.grid().dz();
    std::array<double, 3> out{};
    for (int col = 0; col < 3; ++col) {
        VolumeField div = sp.derivative(F[0][col], 1, 0);
        div += sp.derivative(F[1][col], 0, 1);
        div += d3(F[2][col], dz);
        out[col] = div.max_abs();
    }
    return out;
}

SmallnessReport smallness_report(const Spectral& sp, const GeometryState& geom, double epsilon, bool with_proxies) {
    SmallnessReport r;
    r.epsilon = epsilon;
    r.E_minus_I_sup = sup_minus_identity(geom.E);
    r.F_minus_I_sup = sup_minus_identity(geom.F);
    VolumeField jm1 = geom.J;
    jm1 += VolumeField(sp.grid(), -1.0);
    r.J_minus_1_sup = jm1.max_abs();
    if (with_proxies) {
        r.E_minus_I_h25 = proxy_minus_identity(sp, geom.E, 2.5);
        r.F_minus_I_h25 = proxy_minus_identity(sp, geom.F, 2.5);
        r.J_minus_1_h25 = sobolev_proxy(sp, jm1, 2.5, 2);
    }
    r.within = r.E_minus_I_sup <= epsilon && r.F_minus_I_sup <= epsilon && r.J_minus_1_sup <= epsilon;
    return r;
}

double inverse_identity_residual(const Spectral& sp, const GeometryState& geom) {
    const auto grad = gradient(sp, geom.psi);
    double worst = 0.0;
    for (std::size_t n = 0; n < geom.psi.size(); ++n) {
        const double row3[3] = {grad[0][n], grad[1][n], grad[2][n]};
        for (int c = 0; c < 3; ++c) {
            // rows 1 and 2 of grad(eta) are unit vectors
            for (int r = 0; r < 2; ++r)
                worst = std::max(worst, std::abs(geom.E[r][c][n] - (r == c ? 1.0 : 0.0)));
            double v = 0.0;
            for (int m = 0; m < 3; ++m) v += row3[m] * geom.E[m][c][n];
            worst = std::max(worst, std::abs(v - (c == 2 ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double cofactor_residual(const GeometryState& geom) {
    double worst = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            for (std::size_t n = 0; n < geom.J.size(); ++n)
                worst = std::max(worst, std::abs(geom.F[r][c][n] - geom.J[n] * geom.E[r][c][n]));
    return worst;
}

double laplacian_residual(const Spectral& sp, const VolumeField& psi) {
    auto s = sp.forward(psi);
    SpectralField lap = sp.derivative(s, 2, 0);
    lap += sp.derivative(s, 0, 2);
    lap += d33(s, sp.grid().dz());
    const auto r = sp.to_volume(lap);
    double worst = 0.0;
    for (int k = 1; k < psi.n3() - 1; ++k)
        for (double x : r.plane(k)) worst = std::max(worst, std::abs(x));
    return worst;
}

}  // namespace kch
