#pragma once

#include "kch/geometry.hpp"

namespace kch {

/// A_i = v1 (D1 + e31 D3) v_i + v2 (D2 + e32 D3) v_i + e33 (v3 - psi_t) D3 v_i, dealiased.
Vec3Field advective_acceleration(const Spectral& sp, const Vec3Field& v, const GeometryState& geom);

/// (E^T grad q)_i = E_ki D_k q, dealiased.
Vec3Field transposed_gradient(const Spectral& sp, const VolumeField& q, const GeometryState& geom);

}  // namespace kch
