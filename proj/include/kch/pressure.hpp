#pragma once

#include "kch/geometry.hpp"
#include "kch/plate.hpp"

#include <vector>

namespace kch {

/// div(d grad q) = div f in the channel,
/// (d grad q)_3 + kappa q = g1 on the top, (d grad q)_3 = g0 on the bottom.
struct EllipticProblem {
    Mat3Field d;
    Vec3Field f;
    SurfaceField g1;
    SurfaceField g0;
    double kappa = 1.0;
    double d_minus_I_sup = 0.0;
};

struct PressureConfig {
    double tol = 1e-10;
    int max_iter = 200;
    /// Largest |d - I| accepted by the fixed point.
    double radius = 0.3;
};

struct PressureSolution {
    VolumeField q;
    /// max-norm of each update divided by max-norm of the iterate
    std::vector<double> updates;
    /// relative max-norm residual in the variable-coefficient discrete problem
    double residual = 0.0;
    /// last ratio of consecutive updates (0 if fewer than two)
    double contraction = 0.0;
    int iterations() const { return static_cast<int>(updates.size()); }
};

/// d = J E E^T and the fluxes, boundary data for the pressure of state (v, w, w_t) in frame geom.
EllipticProblem assemble_pressure_problem(const Spectral& sp, const Vec3Field& v, const GeometryState& geom,
                                          const SurfaceField& w, const SurfaceField& w_t, const PlateParams& params);

/// Problem with the given d and zero data (for manufactured tests).
EllipticProblem identity_problem(const Grid& g, double kappa);

/// Discrete operator rows applied to q: interior rows hold
/// (D11 + D22 + compact d33) q + Div P((d - I) grad q), wall rows the boundary functionals.
VolumeField apply_pressure_operator(const Spectral& sp, const EllipticProblem& pb, const VolumeField& q);
/// Right-hand side rows: Div P f inside, g0 and g1 on the walls.
VolumeField pressure_rhs(const Spectral& sp, const EllipticProblem& pb);

/// Defect-correction iteration around the constant-coefficient Robin-Neumann operator.
/// Throws SmallnessError if |d - I| exceeds cfg.radius and ConvergenceError after max_iter.
PressureSolution solve_robin_neumann(const Spectral& sp, const EllipticProblem& pb, const PressureConfig& cfg,
                                     const VolumeField* initial = nullptr);

/// Subtracts the constant that gives the top trace zero mean; returns that constant.
double normalize_surface_mean(VolumeField& q);

}  // namespace kch
