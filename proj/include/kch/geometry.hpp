#pragma once

#include "kch/grid.hpp"
#include "kch/spectral.hpp"

#include <array>

namespace kch {

struct SmallnessReport {
    double epsilon = 0.0;
    double E_minus_I_sup = 0.0;
    double F_minus_I_sup = 0.0;
    double J_minus_1_sup = 0.0;
    // H^{2.5}-type proxies of the same quantities
    double E_minus_I_h25 = 0.0;
    double F_minus_I_h25 = 0.0;
    double J_minus_1_h25 = 0.0;
    bool within = true;
};

/// ALE frame of one plate configuration.
struct GeometryState {
    VolumeField psi;
    VolumeField psi_t;
    VolumeField J;
    Mat3Field E;
    Mat3Field F;
    SmallnessReport smallness;
};

inline constexpr double kDefaultCmin = 0.1;

/// Harmonic extension of 1 + w into the channel: psi = 0 on the bottom,
/// psi = 1 + w on the top, each horizontal mode given by its closed-form profile.
VolumeField harmonic_extension(const Spectral& sp, const SurfaceField& w);

/// Extension of a plate velocity: the same per-mode profiles without the "1 +".
VolumeField velocity_extension(const Spectral& sp, const SurfaceField& w_t);

/// Fills J = D3 psi, E and F = J E. Throws NondegeneracyError if J <= c_min.
/// psi_t is left zero and the smallness report empty.
GeometryState ale_matrices(const Spectral& sp, const VolumeField& psi, double c_min = kDefaultCmin);

/// Full frame for (w, w_t), including psi_t and the sup-norm part of the smallness
/// report at epsilon (the proxy norms are left zero; see smallness_report).
GeometryState build_geometry(const Spectral& sp, const SurfaceField& w, const SurfaceField& w_t, double epsilon,
                             double c_min = kDefaultCmin);

/// Flat frame (w = 0, w_t = 0).
GeometryState flat_geometry(const Spectral& sp);

/// max over nodes of |d_i F_ij| for j = 1, 2, 3.
std::array<double, 3> piola_residual(const Spectral& sp, const Mat3Field& F);

SmallnessReport smallness_report(const Spectral& sp, const GeometryState& geom, double epsilon,
                                 bool with_proxies = true);

/// max |grad(eta) E - I| with grad(eta) rows (1,0,0), (0,1,0), (D1 psi, D2 psi, D3 psi).
double inverse_identity_residual(const Spectral& sp, const GeometryState& geom);
/// max |F - J E|.
double cofactor_residual(const GeometryState& geom);
/// max over interior nodes of |(D11 + D22 + d33) psi|.
double laplacian_residual(const Spectral& sp, const VolumeField& psi);

}  // namespace kch
