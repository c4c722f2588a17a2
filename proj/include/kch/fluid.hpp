#pragma once

#include "kch/geometry.hpp"
#include "kch/kernels.hpp"
#include "kch/plate.hpp"
#include "kch/pressure.hpp"

namespace kch {

struct FluidConfig {
    PressureConfig pressure;
    double cfl_max = 0.5;
    bool divergence_cleanup = true;
    /// target for max|D_j P(F_ji v_i)| relative to max|v| / min spacing
    double projection_tol = 1e-13;
    int projection_max_iter = 60;
};

struct FluidState {
    Vec3Field v;
    /// pressure of the last midpoint stage, top-trace mean removed
    VolumeField q;
    double t = 0.0;
};

/// Geometry plus plate data at one stage time.
struct StageFrame {
    const GeometryState* geom = nullptr;
    const SurfaceField* w = nullptr;
    const SurfaceField* w_t = nullptr;
};

struct StageEval {
    Vec3Field rhs;
    VolumeField q;  // as solved (Robin-pinned)
    int pressure_iterations = 0;
    double pressure_residual = 0.0;
};

/// -(A_i + E_ki D_k q), dealiased.
Vec3Field momentum_rhs(const Spectral& sp, const Vec3Field& v, const VolumeField& q, const GeometryState& geom);

/// Solves the pressure for (v, frame) and returns the momentum right-hand side.
/// `q_guess` only seeds the pressure iteration.
StageEval evaluate_stage(const Spectral& sp, const Vec3Field& v, const StageFrame& frame, const PlateParams& params,
                         const FluidConfig& cfg, const VolumeField* q_guess = nullptr);

/// v3 = 0 on the bottom; v3 = w_t + D1 psi v1 + D2 psi v2 on the top (so that F_3i v_i = w_t).
void impose_boundary_conditions(Vec3Field& v, const GeometryState& geom, const SurfaceField& w_t);

/// max over the top of |F_3i v_i - w_t|.
double interface_residual(const Vec3Field& v, const GeometryState& geom, const SurfaceField& w_t);

/// J^{-1} D_j P(F_ji v_i): the divergence in flux form (centred D3 inside, one-sided on the walls).
VolumeField ale_divergence(const Spectral& sp, const Vec3Field& v, const GeometryState& geom);
/// max over interior nodes of |ale_divergence|.
double divergence_monitor(const Spectral& sp, const Vec3Field& v, const GeometryState& geom);

/// Largest (|v1|/dx1 + |v2|/dx2 + |reference vertical speed|/dz) * dt.
double cfl_number(const Spectral& sp, const Vec3Field& v, const GeometryState& geom, double dt);

/// Removes the discrete flux-form divergence: v <- v - P(E^T grad phi) with phi
/// chosen so that D_j P(F_ji v_i) = 0 at interior nodes and the normal flux on the
/// walls is untouched. Solved by defect correction around the flat operator, whose
/// per-mode matrices are factored once.
class Projector {
public:
    explicit Projector(const Spectral& sp);

    struct Result {
        int iterations = 0;
        double divergence_before = 0.0;  // max interior |D_j P(F_ji v_i)|
        double divergence_after = 0.0;
    };
    Result apply(Vec3Field& v, const GeometryState& geom, double tol, int max_iter) const;

private:
    const Spectral& sp_;
    kernels::BandModes modes_;
    kernels::DenseModeSolver flat_;
};

struct FluidStepResult {
    FluidState state;
    Vec3Field v_mid;
    StageEval stage_mid;
    Projector::Result projection;
};

/// Explicit midpoint step from frame `start` through `mid` to `end`. The pressure is
/// re-solved at each stage; boundary conditions are imposed after each stage and
/// the cleanup runs as BC, projection, BC. `cached_start`, if given, must be the
/// stage evaluation of (state.v, start); `mid_guess` seeds the midpoint pressure.
FluidStepResult fluid_step(const Spectral& sp, const Projector& projector, const FluidState& state,
                           const StageFrame& start, const StageFrame& mid, const StageFrame& end,
                           const PlateParams& params, const FluidConfig& cfg, double dt,
                           const StageEval* cached_start = nullptr, const VolumeField* mid_guess = nullptr);

struct VorticityState {
    Vec3Field zeta;
    Vec3Field theta;
};

/// zeta_i = eps_ijk E_mj D_m v_k, dealiased.
Vec3Field ale_vorticity(const Spectral& sp, const Vec3Field& v, const GeometryState& geom);

/// Advances theta by the explicit midpoint rule with the stage velocities and frames
/// of the fluid step:  theta_t = -(advection of theta) + theta_k E_mk D_m v.
/// zeta is refreshed from v_end.
VorticityState vorticity_transport_step(const Spectral& sp, const VorticityState& vort, const Vec3Field& v_start,
                                        const GeometryState& geom_start, const Vec3Field& v_mid,
                                        const GeometryState& geom_mid, const Vec3Field& v_end,
                                        const GeometryState& geom_end, double dt);

struct DivCurlNorms {
    double curl_norm = 0.0;   // H^{2.5} proxy of zeta
    double div_norm = 0.0;    // H^{2.5} proxy of the ALE divergence
    double trace_norm = 0.0;  // H^3 proxy of the normal trace on both walls
    double l2_norm = 0.0;
    double h35_proxy = 0.0;
};

DivCurlNorms divcurl_norms(const Spectral& sp, const Vec3Field& v, const GeometryState& geom);

/// H^{s} proxy of a vector field: the root sum of squares of its components.
double vector_proxy(const Spectral& sp, const Vec3Field& v, double s, int vertical_order);

}  // namespace kch
