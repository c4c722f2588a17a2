#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace kch {

/// Collocation grid on T^2 x [0,1]: n1 x n2 Fourier points per plane (period 1),
/// n3 equispaced vertical nodes including both walls.
struct Grid {
    int n1 = 0;
    int n2 = 0;
    int n3 = 0;

    /// Throws ConfigError unless n1, n2 are powers of two >= 8 and n3 >= 9.
    static Grid make(int n1, int n2, int n3);

    double dz() const { return 1.0 / (n3 - 1); }
    double x1(int i) const { return static_cast<double>(i) / n1; }
    double x2(int j) const { return static_cast<double>(j) / n2; }
    double x3(int k) const { return k * dz(); }

    std::size_t plane_size() const { return static_cast<std::size_t>(n1) * n2; }
    std::size_t volume_size() const { return plane_size() * n3; }
    /// Number of stored k1 coefficients per row of a real-to-complex transform.
    int nh() const { return n1 / 2 + 1; }
    std::size_t spectral_plane_size() const { return static_cast<std::size_t>(n2) * nh(); }

    bool operator==(const Grid&) const = default;
};

/// Planes of n1 x n2 real samples, plane-major (index = (k*n2 + j)*n1 + i).
class PlaneStack {
public:
    PlaneStack() = default;
    PlaneStack(int n1, int n2, int planes, double fill = 0.0)
        : n1_(n1), n2_(n2), planes_(planes), data_(static_cast<std::size_t>(n1) * n2 * planes, fill) {}

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int planes() const { return planes_; }
    std::size_t plane_size() const { return static_cast<std::size_t>(n1_) * n2_; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }
    std::span<double> plane(int k) { return {data_.data() + k * plane_size(), plane_size()}; }
    std::span<const double> plane(int k) const { return {data_.data() + k * plane_size(), plane_size()}; }

    double& operator[](std::size_t n) { return data_[n]; }
    double operator[](std::size_t n) const { return data_[n]; }

    double max_abs() const;
    bool all_finite() const;

protected:
    void check_same_shape(const PlaneStack& other) const;
    void add_scaled(const PlaneStack& other, double s);
    void scale(double s);

    int n1_ = 0;
    int n2_ = 0;
    int planes_ = 0;
    std::vector<double> data_;
};

/// Real scalar field on the periodic plate surface Gamma_1.
class SurfaceField : public PlaneStack {
public:
    SurfaceField() = default;
    explicit SurfaceField(const Grid& g, double fill = 0.0) : PlaneStack(g.n1, g.n2, 1, fill) {}
    SurfaceField(int n1, int n2, double fill = 0.0) : PlaneStack(n1, n2, 1, fill) {}

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * n1_ + i]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * n1_ + i]; }

    double mean() const;

    SurfaceField& operator+=(const SurfaceField& o) { add_scaled(o, 1.0); return *this; }
    SurfaceField& operator-=(const SurfaceField& o) { add_scaled(o, -1.0); return *this; }
    SurfaceField& operator*=(double s) { scale(s); return *this; }
    /// this += s * o
    SurfaceField& axpy(double s, const SurfaceField& o) { add_scaled(o, s); return *this; }
};

/// Real scalar field on the reference channel Omega = T^2 x [0,1].
class VolumeField : public PlaneStack {
public:
    VolumeField() = default;
    explicit VolumeField(const Grid& g, double fill = 0.0) : PlaneStack(g.n1, g.n2, g.n3, fill) {}

    int n3() const { return planes_; }
    double& operator()(int i, int j, int k) { return data_[(static_cast<std::size_t>(k) * n2_ + j) * n1_ + i]; }
    double operator()(int i, int j, int k) const { return data_[(static_cast<std::size_t>(k) * n2_ + j) * n1_ + i]; }

    /// Copy of plane k as a surface field (k = n3-1 is the trace on Gamma_1).
    SurfaceField trace(int k) const;
    void set_plane(int k, const SurfaceField& s);

    VolumeField& operator+=(const VolumeField& o) { add_scaled(o, 1.0); return *this; }
    VolumeField& operator-=(const VolumeField& o) { add_scaled(o, -1.0); return *this; }
    VolumeField& operator*=(double s) { scale(s); return *this; }
    VolumeField& axpy(double s, const VolumeField& o) { add_scaled(o, s); return *this; }
};

SurfaceField operator+(SurfaceField a, const SurfaceField& b);
SurfaceField operator-(SurfaceField a, const SurfaceField& b);
SurfaceField operator*(double s, SurfaceField a);
VolumeField operator+(VolumeField a, const VolumeField& b);
VolumeField operator-(VolumeField a, const VolumeField& b);
VolumeField operator*(double s, VolumeField a);

using Vec3Field = std::array<VolumeField, 3>;
using Mat3Field = std::array<std::array<VolumeField, 3>, 3>;

Vec3Field make_vec3(const Grid& g, double fill = 0.0);

}  // namespace kch
