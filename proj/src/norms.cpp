#include "kch/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace kch {

namespace {

// (1 + |2 pi k|^2)^s per stored coefficient, doubled for the columns that stand
// for a conjugate pair.
std::vector<double> multipliers(const Spectral& sp, double exponent) {
    const auto& g = sp.grid();
    const int nh = g.nh();
    std::vector<double> m(static_cast<std::size_t>(g.n2) * nh);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < nh; ++i) {
            const double pair = (i == 0 || 2 * i == g.n1) ? 1.0 : 2.0;
            m[static_cast<std::size_t>(j) * nh + i] =
                pair * (exponent == 0.0 ? 1.0 : std::pow(1.0 + sp.wave_norm_sq(i, j), exponent));
        }
    return m;
}

double weighted_plane_energy(const std::vector<double>& mult, const SpectralField& s, int k) {
    const auto pl = s.plane(k);
    double sum = 0.0;
    for (std::size_t n = 0; n < pl.size(); ++n) sum += mult[n] * std::norm(pl[n]);
    return sum;
}

}  // namespace

std::vector<double> vertical_weights(int n3) {
    std::vector<double> w(n3, 1.0 / (n3 - 1));
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double surface_integral(const SurfaceField& f) { return f.mean(); }

double surface_inner(const SurfaceField& a, const SurfaceField& b) {
    double sum = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) sum += a[m] * b[m];
    return sum / static_cast<double>(a.size());
}

double l2_norm(const SurfaceField& f) { return std::sqrt(surface_inner(f, f)); }

double volume_integral(const VolumeField& f) {
    const auto w = vertical_weights(f.n3());
    const std::size_t ps = f.plane_size();
    double total = 0.0;
    for (int k = 0; k < f.n3(); ++k) {
        double plane = 0.0;
        for (double x : f.plane(k)) plane += x;
        total += w[k] * plane / static_cast<double>(ps);
    }
    return total;
}

double l2_norm(const VolumeField& f) { return std::sqrt(volume_integral(product(f, f))); }

double sobolev_proxy(const Spectral& sp, const SurfaceField& f, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_proxy: s must be >= 0");
    const auto spec = sp.forward(f);
    return std::sqrt(weighted_plane_energy(multipliers(sp, s), spec, 0));
}

double sobolev_proxy(const Spectral& sp, const VolumeField& f, double s, int max_vertical_order) {
    if (s < 0.0) throw std::invalid_argument("sobolev_proxy: s must be >= 0");
    if (max_vertical_order < 0 || max_vertical_order > 2)
        throw std::invalid_argument("sobolev_proxy: vertical order must be 0, 1 or 2");
    const auto w = vertical_weights(f.n3());
    const double dz = sp.grid().dz();
    auto spec = sp.forward(f);
    const auto mult = multipliers(sp, s);
    double total = 0.0;
    for (int order = 0; order <= max_vertical_order; ++order) {
        if (order > 0) spec = d3(spec, dz);
        for (int k = 0; k < f.n3(); ++k) total += w[k] * weighted_plane_energy(mult, spec, k);
    }
    return std::sqrt(total);
}

}  // namespace kch
