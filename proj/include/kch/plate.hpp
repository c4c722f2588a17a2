#pragma once

#include "kch/grid.hpp"
#include "kch/spectral.hpp"

#include <array>

namespace kch {

enum class CurvatureModel { NonNormalized, Normalized };

/// Koiter: h w_tt + L_K w - nu Lap w_t = q.
/// Biharmonic: the linear variant w_tt + Lap^2 w - nu Lap w_t = q.
enum class PlateModel { Koiter, Biharmonic };

struct PlateParams {
    double h = 0.1;
    double lambda = 1.0;
    double mu = 1.0;
    double nu = 0.0;
    CurvatureModel curvature = CurvatureModel::NonNormalized;
    PlateModel model = PlateModel::Koiter;

    /// 4 lambda mu / (lambda + 2 mu), the trace part of a^{abst}.
    double c1() const { return 4.0 * lambda * mu / (lambda + 2.0 * mu); }
    /// Coefficient of w_tt; its inverse is the Robin coefficient of the pressure problem.
    double inertia() const { return model == PlateModel::Koiter ? h : 1.0; }
    /// Multiplier of |k|^4 in the linear bending operator.
    double bending_stiffness() const;
    void validate() const;  // ConfigError on h, lambda, mu <= 0 or nu < 0
};

struct PlateState {
    SurfaceField w;
    SurfaceField w_t;
    double t = 0.0;
};

/// Symmetric 2x2 tensor field stored as (11, 12, 22).
using Sym2Field = std::array<SurfaceField, 3>;

/// G_ab = D_a w D_b w, dealiased.
Sym2Field metric_change(const Spectral& sp, const SurfaceField& w);
/// R_ab = D_a D_b w, or D_a D_b w / sqrt(1 + |Dw|^2) for the normalized model (dealiased).
Sym2Field curvature_change(const Spectral& sp, const SurfaceField& w, CurvatureModel model);

/// (h/4) <A G, G> and (h^3/48) <A R, R> on the unit torus.
double membrane_energy(const Spectral& sp, const SurfaceField& w, const PlateParams& p);
double bending_energy(const Spectral& sp, const SurfaceField& w, const PlateParams& p);
/// Potential energy of the plate model (E_K for Koiter, (1/2)|Lap w|^2 for the biharmonic variant).
double koiter_energy(const Spectral& sp, const SurfaceField& w, const PlateParams& p);

SurfaceField membrane_operator(const Spectral& sp, const SurfaceField& w, const PlateParams& p);
SurfaceField bending_operator(const Spectral& sp, const SurfaceField& w, const PlateParams& p);
/// L_K = L_m + L_b (the gradient of koiter_energy); zero surface mean.
SurfaceField elastic_operator(const Spectral& sp, const SurfaceField& w, const PlateParams& p);

/// inertia/2 |w_t|^2 + koiter_energy(w).
double plate_energy(const Spectral& sp, const PlateState& s, const PlateParams& p);

/// One step of length dt under forcing q (zero mean). The linear bending and
/// damping parts are advanced with per-mode trapezoidal half steps around an
/// explicit kick by the nonlinear remainder evaluated at the midpoint.
PlateState plate_step(const Spectral& sp, const PlateState& s, const SurfaceField& q, const PlateParams& p,
                      double dt);

/// Relative mismatch between <L_K w, xi> and the centred difference of the energy.
double energy_gradient_check(const Spectral& sp, const SurfaceField& w, const SurfaceField& xi, const PlateParams& p,
                             double fd_step);

}  // namespace kch
