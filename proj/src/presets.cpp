#include "kch/presets.hpp"

#include "kch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace kch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// v = (D2 A3 - D3 A2, D3 A1 - D1 A3, D1 A2 - D2 A1)
Vec3Field discrete_curl(const Spectral& sp, const Vec3Field& a) {
    const double dz = sp.grid().dz();
    Vec3Field v = {sp.derivative(a[2], 0, 1) - d3(a[1], dz), d3(a[0], dz) - sp.derivative(a[2], 1, 0),
                   sp.derivative(a[1], 1, 0) - sp.derivative(a[0], 0, 1)};
    return v;
}

template <class Fn>
VolumeField sample(const Grid& g, Fn fn) {
    VolumeField f(g);
    for (int k = 0; k < g.n3; ++k)
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) f(i, j, k) = fn(g.x1(i), g.x2(j), g.x3(k));
    return f;
}

// Uniform in [-1, 1) from raw engine bits, independent of the library's distributions.
double symmetric_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

InitialData zero_data(const Grid& g) { return {make_vec3(g), SurfaceField(g), SurfaceField(g)}; }

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"zero", "shear_flow", "single_mode_plate", "random_bandlimited"};
    return names;
}

InitialData make_initial_data(const Spectral& sp, const PresetParams& p) {
    const auto& g = sp.grid();
    InitialData d = zero_data(g);
    if (p.name == "zero") return d;

    Vec3Field a = make_vec3(g);
    if (p.name == "shear_flow") {
        a[2] = sample(g, [&](double, double y, double) { return -p.shear * std::cos(kTwoPi * y) / kTwoPi; });
    } else if (p.name == "single_mode_plate") {
        const double s = std::sinh(kTwoPi);
        a[1] = sample(g, [&](double x, double, double z) {
            return p.amplitude * std::sinh(kTwoPi * z) / s * std::sin(kTwoPi * x) / kTwoPi;
        });
        a[2] = sample(g, [&](double x, double y, double) {
            return p.swirl * (-std::cos(kTwoPi * y) / kTwoPi + std::cos(2.0 * kTwoPi * x) / (2.0 * kTwoPi));
        });
    } else if (p.name == "random_bandlimited") {
        std::mt19937_64 rng(p.seed);
        const int kmax = std::max(1, std::min({3, sp.band_limit1() / 2, sp.band_limit2() / 2}));
        for (int c = 0; c < 3; ++c) {
            for (int k1 = -kmax; k1 <= kmax; ++k1) {
                for (int k2 = -kmax; k2 <= kmax; ++k2) {
                    for (int m = 1; m <= 2; ++m) {
                        const double ac = symmetric_unit(rng);
                        const double as = symmetric_unit(rng);
                        const double damp = 1.0 / (1.0 + k1 * k1 + k2 * k2 + m * m);
                        // A1, A2 vanish on the bottom so that v3 does.
                        auto profile = [c, m](double z) {
                            return c < 2 ? std::sin(0.5 * m * std::numbers::pi * z) : std::cos(m * std::numbers::pi * z);
                        };
                        a[c] += sample(g, [&](double x, double y, double z) {
                            const double ph = kTwoPi * (k1 * x + k2 * y);
                            return damp * (ac * std::cos(ph) + as * std::sin(ph)) * profile(z);
                        });
                    }
                }
            }
        }
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("initial_data.preset: unknown preset '" + p.name + "' (known: " + known + ")");
    }

    d.v0 = discrete_curl(sp, a);
    if (p.name == "random_bandlimited") {
        double vmax = 0.0;
        for (const auto& c : d.v0) vmax = std::max(vmax, c.max_abs());
        if (vmax > 0.0)
            for (auto& c : d.v0) c *= p.amplitude / vmax;
    }
    d.w1 = d.v0[2].trace(g.n3 - 1);
    return d;
}

}  // namespace kch
