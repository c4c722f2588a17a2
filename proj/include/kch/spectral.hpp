#pragma once

#include "kch/grid.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace kch {

using Complex = std::complex<double>;

/// Horizontal Fourier coefficients of a PlaneStack: per plane, n2 rows of n1/2+1
/// coefficients (index = (k*n2 + j)*nh + i). Coefficients are normalised so that
/// the (0,0) entry is the plane mean.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(int n2, int nh, int planes)
        : n2_(n2), nh_(nh), planes_(planes), data_(static_cast<std::size_t>(n2) * nh * planes) {}

    int n2() const { return n2_; }
    int nh() const { return nh_; }
    int planes() const { return planes_; }
    std::size_t plane_size() const { return static_cast<std::size_t>(n2_) * nh_; }
    std::size_t size() const { return data_.size(); }

    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }
    std::span<Complex> plane(int k) { return {data_.data() + k * plane_size(), plane_size()}; }
    std::span<const Complex> plane(int k) const { return {data_.data() + k * plane_size(), plane_size()}; }

    Complex& operator()(int i, int j, int k = 0) { return data_[(static_cast<std::size_t>(k) * n2_ + j) * nh_ + i]; }
    Complex operator()(int i, int j, int k = 0) const { return data_[(static_cast<std::size_t>(k) * n2_ + j) * nh_ + i]; }
    Complex& operator[](std::size_t n) { return data_[n]; }
    Complex operator[](std::size_t n) const { return data_[n]; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

private:
    int n2_ = 0;
    int nh_ = 0;
    int planes_ = 0;
    std::vector<Complex> data_;
};

/// FFTW-backed horizontal transforms and spectral symbols for one grid.
///
/// Odd derivatives zero the Nyquist coefficient so that every first-derivative
/// matrix is exactly skew-symmetric in the discrete inner product; higher
/// derivatives are products of first-derivative symbols. Transforms may be
/// called concurrently on distinct arrays once the object is constructed.
class Spectral {
public:
    explicit Spectral(const Grid& grid);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    const Grid& grid() const { return grid_; }

    SpectralField forward(const PlaneStack& f) const;
    void inverse(const SpectralField& s, PlaneStack& out) const;
    VolumeField to_volume(const SpectralField& s) const;
    SurfaceField to_surface(const SpectralField& s) const;

    /// Signed integer wavenumbers of stored index pairs.
    int wavenumber1(int i) const { return i; }
    int wavenumber2(int j) const { return j <= grid_.n2 / 2 ? j : j - grid_.n2; }
    /// Real factor d of the first-derivative symbol i*d (zero at Nyquist).
    double deriv1(int i) const;
    double deriv2(int j) const;
    /// -symbol of D1 D1 + D2 D2, i.e. deriv1^2 + deriv2^2 >= 0.
    double laplacian_symbol(int i, int j) const;
    /// |2 pi k|^2 with the true wavenumber (used by norm multipliers).
    double wave_norm_sq(int i, int j) const;
    /// 2/3-rule band: |k1| <= n1/3 and |k2| <= n2/3.
    bool in_band(int i, int j) const;
    int band_limit1() const { return grid_.n1 / 3; }
    int band_limit2() const { return grid_.n2 / 3; }

    void dealias(SpectralField& s) const;
    /// Dealiased copy of a real field.
    template <class F>
    F dealiased(const F& f) const {
        auto s = forward(f);
        dealias(s);
        F out = f;
        inverse(s, out);
        return out;
    }

    /// In-place multiplication by the symbols of D1^a D2^b.
    void apply_derivative(SpectralField& s, int a, int b) const;
    SpectralField derivative(const SpectralField& s, int a, int b) const;

    /// Physical-space horizontal derivative of a real field.
    template <class F>
    F derivative(const F& f, int a, int b) const {
        auto s = forward(f);
        apply_derivative(s, a, b);
        F out = f;
        inverse(s, out);
        return out;
    }

private:
    struct Plans;
    Plans& plans_for(int howmany) const;

    Grid grid_;
    std::vector<unsigned char> band_mask_;  // in_band per stored coefficient of one plane
    std::unique_ptr<Plans> surface_plans_;
    std::unique_ptr<Plans> volume_plans_;
};

// ---------------------------------------------------------------------------
// Vertical finite differences: centred three-point stencils in the interior,
// one-sided second-order stencils on the walls. Applied plane-wise, so they
// commute exactly with horizontal spectral operations.

namespace vertical {

template <class T>
void d3(std::span<const T> in, std::span<T> out, std::size_t plane, int n3, double dz);
template <class T>
void d33(std::span<const T> in, std::span<T> out, std::size_t plane, int n3, double dz);

}  // namespace vertical

VolumeField d3(const VolumeField& f, double dz);
VolumeField d33(const VolumeField& f, double dz);
SpectralField d3(const SpectralField& f, double dz);
SpectralField d33(const SpectralField& f, double dz);

/// (D1 f, D2 f, D3 f) with spectral horizontal and finite-difference vertical parts.
Vec3Field gradient(const Spectral& sp, const VolumeField& f);

/// Pointwise product helpers used throughout the flux assembly.
VolumeField product(const VolumeField& a, const VolumeField& b);
SurfaceField product(const SurfaceField& a, const SurfaceField& b);

/// Surface mean in spectral form (coefficient (0,0) of plane k).
double plane_mean(const SpectralField& s, int k = 0);

}  // namespace kch
