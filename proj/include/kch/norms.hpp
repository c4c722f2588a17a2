#pragma once

#include "kch/grid.hpp"
#include "kch/spectral.hpp"

namespace kch {

/// Trapezoid weights in x3 (sum to 1).
std::vector<double> vertical_weights(int n3);

/// Integral over Gamma_1 (area 1) by the exact spectral mean.
double surface_integral(const SurfaceField& f);
/// <a, b> on Gamma_1.
double surface_inner(const SurfaceField& a, const SurfaceField& b);
double l2_norm(const SurfaceField& f);

/// Integral over Omega: spectral mean in (x1, x2), trapezoid in x3.
double volume_integral(const VolumeField& f);
double l2_norm(const VolumeField& f);

/// Discrete H^s-type norm proxy: the horizontal multiplier (1 + |2 pi k|^2)^s
/// (the symbol of Lambda^{2s}, Lambda = (I - Delta_2)^{1/2}) applied to the
/// coefficients of the field and of its vertical difference derivatives of
/// order 0..max_vertical_order, summed with the x3 quadrature. For a surface
/// field the vertical order is ignored. With s = 0 and order 0 this is the
/// discrete L2 norm.
double sobolev_proxy(const Spectral& sp, const SurfaceField& f, double s);
double sobolev_proxy(const Spectral& sp, const VolumeField& f, double s, int max_vertical_order);

}  // namespace kch
