#include "kch/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace kch {

namespace {

// The FFTW planner is not reentrant; execution with the new-array interface is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (o.size() != size()) throw std::invalid_argument("spectral shape mismatch");
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (o.size() != size()) throw std::invalid_argument("spectral shape mismatch");
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : data_) c *= s;
    return *this;
}

struct Spectral::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    int howmany = 0;

    Plans(const Grid& g, int count) : howmany(count) {
        const int dims[2] = {g.n2, g.n1};
        const int rdist = g.n1 * g.n2;
        const int cdist = g.n2 * g.nh();
        std::vector<double> rbuf(static_cast<std::size_t>(rdist) * count);
        std::vector<Complex> cbuf(static_cast<std::size_t>(cdist) * count);
        auto* cptr = reinterpret_cast<fftw_complex*>(cbuf.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard lock(planner_mutex());
        r2c = fftw_plan_many_dft_r2c(2, dims, count, rbuf.data(), nullptr, 1, rdist, cptr, nullptr, 1, cdist, flags);
        c2r = fftw_plan_many_dft_c2r(2, dims, count, cptr, nullptr, 1, cdist, rbuf.data(), nullptr, 1, rdist, flags);
        if (r2c == nullptr || c2r == nullptr) throw std::runtime_error("FFTW planning failed");
    }

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
    }
};

Spectral::Spectral(const Grid& grid)
    : grid_(grid),
      surface_plans_(std::make_unique<Plans>(grid, 1)),
      volume_plans_(std::make_unique<Plans>(grid, grid.n3)) {
    band_mask_.resize(grid.spectral_plane_size());
    for (int j = 0; j < grid.n2; ++j)
        for (int i = 0; i < grid.nh(); ++i) band_mask_[static_cast<std::size_t>(j) * grid.nh() + i] = in_band(i, j);
}

Spectral::~Spectral() = default;

Spectral::Plans& Spectral::plans_for(int howmany) const {
    if (howmany == 1) return *surface_plans_;
    if (howmany == grid_.n3) return *volume_plans_;
    throw std::invalid_argument("Spectral: unsupported plane count");
}

SpectralField Spectral::forward(const PlaneStack& f) const {
    if (f.n1() != grid_.n1 || f.n2() != grid_.n2) throw std::invalid_argument("Spectral::forward: shape mismatch");
    auto& p = plans_for(f.planes());
    SpectralField out(grid_.n2, grid_.nh(), f.planes());
    // FFTW's r2c does not modify its input, the const_cast only satisfies the C API.
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(f.data()), reinterpret_cast<fftw_complex*>(out.data()));
    out *= 1.0 / static_cast<double>(grid_.plane_size());
    return out;
}

void Spectral::inverse(const SpectralField& s, PlaneStack& out) const {
    if (out.planes() != s.planes() || out.n1() != grid_.n1 || out.n2() != grid_.n2)
        throw std::invalid_argument("Spectral::inverse: shape mismatch");
    auto& p = plans_for(s.planes());
    SpectralField scratch = s;  // c2r overwrites its input
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

VolumeField Spectral::to_volume(const SpectralField& s) const {
    VolumeField out(grid_);
    inverse(s, out);
    return out;
}

SurfaceField Spectral::to_surface(const SpectralField& s) const {
    SurfaceField out(grid_);
    inverse(s, out);
    return out;
}

double Spectral::deriv1(int i) const {
    if (2 * i == grid_.n1) return 0.0;
    return kTwoPi * wavenumber1(i);
}

double Spectral::deriv2(int j) const {
    if (2 * j == grid_.n2) return 0.0;
    return kTwoPi * wavenumber2(j);
}

double Spectral::laplacian_symbol(int i, int j) const {
    const double a = deriv1(i);
    const double b = deriv2(j);
    return a * a + b * b;
}

double Spectral::wave_norm_sq(int i, int j) const {
    const double a = kTwoPi * wavenumber1(i);
    const double b = kTwoPi * wavenumber2(j);
    return a * a + b * b;
}

bool Spectral::in_band(int i, int j) const {
    return std::abs(wavenumber1(i)) <= band_limit1() && std::abs(wavenumber2(j)) <= band_limit2();
}

void Spectral::dealias(SpectralField& s) const {
    for (int k = 0; k < s.planes(); ++k) {
        auto pl = s.plane(k);
        for (std::size_t m = 0; m < pl.size(); ++m)
            if (!band_mask_[m]) pl[m] = 0.0;
    }
}

void Spectral::apply_derivative(SpectralField& s, int a, int b) const {
    if (a == 0 && b == 0) return;
    const int nh = grid_.nh();
    // (i d1)^a (i d2)^b = i^(a+b) d1^a d2^b
    const int order = a + b;
    static constexpr Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex phase = ipow[order % 4];
    std::vector<Complex> row_factor(static_cast<std::size_t>(grid_.n2) * nh);
    for (int j = 0; j < grid_.n2; ++j)
        for (int i = 0; i < nh; ++i)
            row_factor[static_cast<std::size_t>(j) * nh + i] =
                phase * std::pow(deriv1(i), a) * std::pow(deriv2(j), b);
    const std::size_t ps = s.plane_size();
    for (int k = 0; k < s.planes(); ++k) {
        auto pl = s.plane(k);
        for (std::size_t m = 0; m < ps; ++m) pl[m] *= row_factor[m];
    }
}

SpectralField Spectral::derivative(const SpectralField& s, int a, int b) const {
    SpectralField out = s;
    apply_derivative(out, a, b);
    return out;
}

namespace vertical {

template <class T>
void d3(std::span<const T> in, std::span<T> out, std::size_t plane, int n3, double dz) {
    const double c = 0.5 / dz;
    for (int k = 0; k < n3; ++k) {
        T* o = out.data() + k * plane;
        if (k == 0) {
            const T* f0 = in.data();
            const T* f1 = f0 + plane;
            const T* f2 = f1 + plane;
            for (std::size_t m = 0; m < plane; ++m) o[m] = c * (-3.0 * f0[m] + 4.0 * f1[m] - f2[m]);
        } else if (k == n3 - 1) {
            const T* f0 = in.data() + k * plane;
            const T* f1 = f0 - plane;
            const T* f2 = f1 - plane;
            for (std::size_t m = 0; m < plane; ++m) o[m] = c * (3.0 * f0[m] - 4.0 * f1[m] + f2[m]);
        } else {
            const T* fp = in.data() + (k + 1) * plane;
            const T* fm = in.data() + (k - 1) * plane;
            for (std::size_t m = 0; m < plane; ++m) o[m] = c * (fp[m] - fm[m]);
        }
    }
}

template <class T>
void d33(std::span<const T> in, std::span<T> out, std::size_t plane, int n3, double dz) {
    const double c = 1.0 / (dz * dz);
    for (int k = 0; k < n3; ++k) {
        T* o = out.data() + k * plane;
        if (k == 0 || k == n3 - 1) {
            // second-order one-sided: (2 f0 - 5 f1 + 4 f2 - f3) / dz^2
            const std::ptrdiff_t step = (k == 0) ? static_cast<std::ptrdiff_t>(plane) : -static_cast<std::ptrdiff_t>(plane);
            const T* f0 = in.data() + k * plane;
            for (std::size_t m = 0; m < plane; ++m)
                o[m] = c * (2.0 * f0[m] - 5.0 * f0[m + step] + 4.0 * f0[m + 2 * step] - f0[m + 3 * step]);
        } else {
            const T* f0 = in.data() + k * plane;
            const T* fp = f0 + plane;
            const T* fm = f0 - plane;
            for (std::size_t m = 0; m < plane; ++m) o[m] = c * (fp[m] - 2.0 * f0[m] + fm[m]);
        }
    }
}

template void d3<double>(std::span<const double>, std::span<double>, std::size_t, int, double);
template void d3<Complex>(std::span<const Complex>, std::span<Complex>, std::size_t, int, double);
template void d33<double>(std::span<const double>, std::span<double>, std::size_t, int, double);
template void d33<Complex>(std::span<const Complex>, std::span<Complex>, std::size_t, int, double);

}  // namespace vertical

VolumeField d3(const VolumeField& f, double dz) {
    VolumeField out = f;
    vertical::d3<double>(f.values(), out.values(), f.plane_size(), f.n3(), dz);
    return out;
}

VolumeField d33(const VolumeField& f, double dz) {
    VolumeField out = f;
    vertical::d33<double>(f.values(), out.values(), f.plane_size(), f.n3(), dz);
    return out;
}

SpectralField d3(const SpectralField& f, double dz) {
    SpectralField out = f;
    vertical::d3<Complex>({f.data(), f.size()}, {out.data(), out.size()}, f.plane_size(), f.planes(), dz);
    return out;
}

SpectralField d33(const SpectralField& f, double dz) {
    SpectralField out = f;
    vertical::d33<Complex>({f.data(), f.size()}, {out.data(), out.size()}, f.plane_size(), f.planes(), dz);
    return out;
}

Vec3Field gradient(const Spectral& sp, const VolumeField& f) {
    auto s = sp.forward(f);
    auto s1 = sp.derivative(s, 1, 0);
    auto s2 = sp.derivative(s, 0, 1);
    return {sp.to_volume(s1), sp.to_volume(s2), d3(f, sp.grid().dz())};
}

VolumeField product(const VolumeField& a, const VolumeField& b) {
    VolumeField out = a;
    const std::size_t n = out.size();
    for (std::size_t m = 0; m < n; ++m) out[m] *= b[m];
    return out;
}

SurfaceField product(const SurfaceField& a, const SurfaceField& b) {
    SurfaceField out = a;
    const std::size_t n = out.size();
    for (std::size_t m = 0; m < n; ++m) out[m] *= b[m];
    return out;
}

double plane_mean(const SpectralField& s, int k) { return s(0, 0, k).real(); }

}  // namespace kch
