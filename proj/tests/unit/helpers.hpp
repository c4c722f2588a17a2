#pragma once

#include "kch/grid.hpp"
#include "kch/pressure.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class F>
kch::SurfaceField surface(const kch::Grid& g, F f) {
    kch::SurfaceField s(g);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) s(i, j) = f(g.x1(i), g.x2(j));
    return s;
}

template <class F>
kch::VolumeField volume(const kch::Grid& g, F f) {
    kch::VolumeField v(g);
    for (int k = 0; k < g.n3; ++k)
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) v(i, j, k) = f(g.x1(i), g.x2(j), g.x3(k));
    return v;
}

// Random trigonometric surface with zero mean. Coefficients are rescaled so
// that sum |c_k| |k| = amp, which bounds both max|w| and max|grad w| / 2pi by amp.
inline kch::SurfaceField random_surface(const kch::Grid& g, std::mt19937_64& rng, double amp, int kmax = 3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    kch::SurfaceField f(g);
    double weight = 0.0;
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double a = u(rng), b = u(rng);
            const double damp = 1.0 / (1.0 + k1 * k1 + k2 * k2);
            weight += damp * (std::abs(a) + std::abs(b)) * std::sqrt(double(k1 * k1 + k2 * k2));
            for (int j = 0; j < g.n2; ++j)
                for (int i = 0; i < g.n1; ++i) {
                    const double ph = kTwoPi * (k1 * g.x1(i) + k2 * g.x2(j));
                    f(i, j) += damp * (a * std::cos(ph) + b * std::sin(ph));
                }
        }
    for (double& x : f.values()) x *= amp / weight;
    return f;
}

inline double max_diff(const kch::PlaneStack& a, const kch::PlaneStack& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

// Problem at d = I whose discrete rows are exactly those of q(x) = cos(2 pi x1) p(x3).
// The interior rows Dh q + (q[k+1] - 2q[k] + q[k-1])/dz^2 are written as a flux
// divergence: f_h = grad_h q, and f3 built so that its centred difference is the
// vertical part. Wall rows are the one-sided normal derivative (+ kappa q on top).
template <class P>
std::pair<kch::EllipticProblem, kch::VolumeField> manufactured_pressure(const kch::Grid& g, double kappa, P profile) {
    const double dz = g.dz();
    const int n3 = g.n3;
    std::vector<double> p(n3), vert(n3, 0.0), f3(n3, 0.0);
    for (int k = 0; k < n3; ++k) p[k] = profile(g.x3(k));
    for (int k = 1; k < n3 - 1; ++k) vert[k] = (p[k + 1] - 2 * p[k] + p[k - 1]) / (dz * dz);
    for (int k = 1; k < n3 - 1; ++k) f3[k + 1] = f3[k - 1] + 2 * dz * vert[k];
    const double bottom = (-3 * p[0] + 4 * p[1] - p[2]) / (2 * dz);
    const double top = (3 * p[n3 - 1] - 4 * p[n3 - 2] + p[n3 - 3]) / (2 * dz) + kappa * p[n3 - 1];

    kch::EllipticProblem pb = kch::identity_problem(g, kappa);
    kch::VolumeField q(g);
    for (int k = 0; k < n3; ++k)
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) {
                const double c = std::cos(kTwoPi * g.x1(i));
                q(i, j, k) = c * p[k];
                pb.f[0](i, j, k) = -kTwoPi * std::sin(kTwoPi * g.x1(i)) * p[k];
                pb.f[2](i, j, k) = c * f3[k];
            }
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            const double c = std::cos(kTwoPi * g.x1(i));
            pb.g0(i, j) = c * bottom;
            pb.g1(i, j) = c * top;
        }
    return {pb, q};
}

}  // namespace test
