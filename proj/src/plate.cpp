#include "kch/plate.hpp"

#include "kch/errors.hpp"
#include "kch/norms.hpp"

#include <cmath>
#include <sstream>

namespace kch {

namespace {

// (D1 w, D2 w)
std::array<SurfaceField, 2> slope(const Spectral& sp, const SurfaceField& w) {
    const auto s = sp.forward(w);
    return {sp.to_surface(sp.derivative(s, 1, 0)), sp.to_surface(sp.derivative(s, 0, 1))};
}

// (D1 D1 w, D1 D2 w, D2 D2 w)
Sym2Field hessian(const Spectral& sp, const SurfaceField& w) {
    const auto s = sp.forward(w);
    return {sp.to_surface(sp.derivative(s, 2, 0)), sp.to_surface(sp.derivative(s, 1, 1)),
            sp.to_surface(sp.derivative(s, 0, 2))};
}

// A X = c1 tr(X) I + 4 mu X
Sym2Field apply_a(const Sym2Field& x, const PlateParams& p) {
    Sym2Field out = x;
    const double c1 = p.c1();
    const double m4 = 4.0 * p.mu;
    for (std::size_t n = 0; n < x[0].size(); ++n) {
        const double tr = x[0][n] + x[2][n];
        out[0][n] = c1 * tr + m4 * x[0][n];
        out[1][n] = m4 * x[1][n];
        out[2][n] = c1 * tr + m4 * x[2][n];
    }
    return out;
}

// mean of X:Y with the off-diagonal entry counted twice
double contract_mean(const Sym2Field& x, const Sym2Field& y) {
    double s = 0.0;
    for (std::size_t n = 0; n < x[0].size(); ++n) s += x[0][n] * y[0][n] + 2.0 * x[1][n] * y[1][n] + x[2][n] * y[2][n];
    return s / static_cast<double>(x[0].size());
}

// D1 f1 + D2 f2, dealiased
SurfaceField divergence(const Spectral& sp, const SurfaceField& f1, const SurfaceField& f2) {
    auto s = sp.forward(f1);
    sp.apply_derivative(s, 1, 0);
    auto t = sp.forward(f2);
    sp.apply_derivative(t, 0, 1);
    s += t;
    sp.dealias(s);
    return sp.to_surface(s);
}

double linear_bending_symbol(const Spectral& sp, const PlateParams& p, int i, int j) {
    const double lap = sp.laplacian_symbol(i, j);
    return p.bending_stiffness() * lap * lap;
}

SurfaceField linear_bending(const Spectral& sp, const SurfaceField& w, const PlateParams& p) {
    auto s = sp.forward(w);
    const auto& g = sp.grid();
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.nh(); ++i) s(i, j) *= linear_bending_symbol(sp, p, i, j);
    return sp.to_surface(s);
}

SurfaceField normalized_bending(const Spectral& sp, const SurfaceField& w, const PlateParams& p) {
    const auto dw = slope(sp, w);
    const auto d2w = hessian(sp, w);
    SurfaceField inv_s(sp.grid());
    for (std::size_t n = 0; n < w.size(); ++n) inv_s[n] = 1.0 / std::sqrt(1.0 + dw[0][n] * dw[0][n] + dw[1][n] * dw[1][n]);

    Sym2Field r = d2w;
    for (auto& c : r) c = sp.dealiased(product(c, inv_s));
    const Sym2Field m = apply_a(r, p);

    // D_s D_t P(M_st / s)
    SpectralField acc(sp.grid().n2, sp.grid().nh(), 1);
    const int orders[3][2] = {{2, 0}, {1, 1}, {0, 2}};
    for (int c = 0; c < 3; ++c) {
        auto s = sp.forward(product(m[c], inv_s));
        sp.apply_derivative(s, orders[c][0], orders[c][1]);
        if (c == 1) s *= 2.0;
        acc += s;
    }
    // D_g P(D_g w (M : D2 w) / s^3)
    SurfaceField md(sp.grid());
    for (std::size_t n = 0; n < w.size(); ++n) {
        const double contraction = m[0][n] * d2w[0][n] + 2.0 * m[1][n] * d2w[1][n] + m[2][n] * d2w[2][n];
        md[n] = contraction * inv_s[n] * inv_s[n] * inv_s[n];
    }
    auto t1 = sp.forward(product(dw[0], md));
    sp.apply_derivative(t1, 1, 0);
    auto t2 = sp.forward(product(dw[1], md));
    sp.apply_derivative(t2, 0, 1);
    acc += t1;
    acc += t2;
    sp.dealias(acc);
    acc *= p.h * p.h * p.h / 24.0;
    return sp.to_surface(acc);
}

void zero_mean(SpectralField& s) { s(0, 0) = 0.0; }

}  // namespace

double PlateParams::bending_stiffness() const {
    if (model == PlateModel::Biharmonic) return 1.0;
    return h * h * h / 24.0 * (c1() + 4.0 * mu);
}

void PlateParams::validate() const {
    auto fail = [](const char* name, double v, const char* rule) {
        std::ostringstream msg;
        msg << "physics." << name << " = " << v << " is invalid (" << rule << ")";
        throw ConfigError(msg.str());
    };
    if (!(h > 0.0)) fail("h", h, "must be > 0");
    if (!(lambda > 0.0)) fail("lambda", lambda, "must be > 0");
    if (!(mu > 0.0)) fail("mu", mu, "must be > 0");
    if (!(nu >= 0.0)) fail("nu", nu, "must be >= 0");
}

Sym2Field metric_change(const Spectral& sp, const SurfaceField& w) {
    const auto dw = slope(sp, w);
    return {sp.dealiased(product(dw[0], dw[0])), sp.dealiased(product(dw[0], dw[1])),
            sp.dealiased(product(dw[1], dw[1]))};
}

Sym2Field curvature_change(const Spectral& sp, const SurfaceField& w, CurvatureModel model) {
    auto r = hessian(sp, w);
    if (model == CurvatureModel::NonNormalized) return r;
    const auto dw = slope(sp, w);
    SurfaceField inv_s(sp.grid());
    for (std::size_t n = 0; n < w.size(); ++n) inv_s[n] = 1.0 / std::sqrt(1.0 + dw[0][n] * dw[0][n] + dw[1][n] * dw[1][n]);
    for (auto& c : r) c = sp.dealiased(product(c, inv_s));
    return r;
}

double membrane_energy(const Spectral& sp, const SurfaceField& w, const PlateParams& p) {
    if (p.model == PlateModel::Biharmonic) return 0.0;
    const auto g = metric_change(sp, w);
    return p.h / 4.0 * contract_mean(apply_a(g, p), g);
}

double bending_energy(const Spectral& sp, const SurfaceField& w, const PlateParams& p) {
    if (p.model == PlateModel::Biharmonic) {
        const auto r = hessian(sp, w);
        const SurfaceField lap = r[0] + r[2];
        return 0.5 * surface_inner(lap, lap);
    }
    const auto r = curvature_change(sp, w, p.curvature);
    return p.h * p.h * p.h / 48.0 * contract_mean(apply_a(r, p), r);
}

double koiter_energy(const Spectral& sp, const SurfaceField& w, const PlateParams& p) {
    return membrane_energy(sp, w, p) + bending_energy(sp, w, p);
}

SurfaceField membrane_operator(const Spectral& sp, const SurfaceField& w, const PlateParams& p) {
    if (p.model == PlateModel::Biharmonic) return SurfaceField(sp.grid());
    const auto ag = apply_a(metric_change(sp, w), p);
    const auto dw = slope(sp, w);
    // -h D_s ((A G)_st D_t w)
    SurfaceField f1 = product(ag[0], dw[0]) + product(ag[1], dw[1]);
    SurfaceField f2 = product(ag[1], dw[0]) + product(ag[2], dw[1]);
    auto out = divergence(sp, f1, f2);
    out *= -p.h;
    return out;
}

SurfaceField bending_operator(const Spectral& sp, const SurfaceField& w, const PlateParams& p) {
    if (p.model == PlateModel::Koiter && p.curvature == CurvatureModel::Normalized) return normalized_bending(sp, w, p);
    return linear_bending(sp, w, p);
}

SurfaceField elastic_operator(const Spectral& sp, const SurfaceField& w, const PlateParams& p) {
    auto s = sp.forward(membrane_operator(sp, w, p) + bending_operator(sp, w, p));
    zero_mean(s);
    return sp.to_surface(s);
}

double plate_energy(const Spectral& sp, const PlateState& s, const PlateParams& p) {
    return 0.5 * p.inertia() * surface_inner(s.w_t, s.w_t) + koiter_energy(sp, s.w, p);
}

PlateState plate_step(const Spectral& sp, const PlateState& s, const SurfaceField& q, const PlateParams& p,
                      double dt) {
    if (!(dt > 0.0)) throw NumericsError("plate_step: dt must be > 0");
    const double qmean = q.mean();
    if (std::abs(qmean) > 1e-12 * std::max(1.0, q.max_abs())) {
        std::ostringstream msg;
        msg << "plate_step: forcing has surface mean " << qmean
            << "; subtract it first (normalize the pressure trace to zero mean)";
        throw NumericsError(msg.str());
    }
    const auto& g = sp.grid();
    const double m = p.inertia();
    const double tau = 0.5 * dt;

    auto w = sp.forward(s.w);
    auto u = sp.forward(s.w_t);

    // Trapezoidal half step of m w_tt + B w + c w_t = 0 on every mode.
    auto drift = [&] {
        for (int j = 0; j < g.n2; ++j) {
            for (int i = 0; i < g.nh(); ++i) {
                const double b = linear_bending_symbol(sp, p, i, j);
                const double c = p.nu * sp.laplacian_symbol(i, j);
                const double lhs = m + 0.25 * tau * tau * b + 0.5 * tau * c;
                const double rhs = m - 0.25 * tau * tau * b - 0.5 * tau * c;
                const Complex u0 = u(i, j);
                const Complex w0 = w(i, j);
                const Complex u1 = (rhs * u0 - tau * b * w0) / lhs;
                w(i, j) = w0 + 0.5 * tau * (u0 + u1);
                u(i, j) = u1;
            }
        }
    };

    drift();
    if (p.model == PlateModel::Koiter) {
        const auto w_mid = sp.to_surface(w);
        SurfaceField force = q;
        force -= elastic_operator(sp, w_mid, p);
        force += linear_bending(sp, w_mid, p);
        auto kick = sp.forward(force);
        zero_mean(kick);
        kick *= dt / m;
        u += kick;
    } else {
        auto kick = sp.forward(q);
        zero_mean(kick);
        kick *= dt / m;
        u += kick;
    }
    drift();

    PlateState out;
    out.w = sp.to_surface(w);
    out.w_t = sp.to_surface(u);
    out.t = s.t + dt;
    return out;
}

double energy_gradient_check(const Spectral& sp, const SurfaceField& w, const SurfaceField& xi, const PlateParams& p,
                             double fd_step) {
    const double pairing = surface_inner(elastic_operator(sp, w, p), xi);
    SurfaceField plus = w;
    plus.axpy(fd_step, xi);
    SurfaceField minus = w;
    minus.axpy(-fd_step, xi);
    const double fd = (koiter_energy(sp, plus, p) - koiter_energy(sp, minus, p)) / (2.0 * fd_step);
    const double scale = std::max(std::abs(fd), std::abs(pairing));
    if (scale == 0.0) return 0.0;
    return std::abs(pairing - fd) / scale;
}

}  // namespace kch
