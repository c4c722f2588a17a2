#include "kch/advection.hpp"

#include "kch/kernels.hpp"

namespace kch {

Vec3Field advective_acceleration(const Spectral& sp, const Vec3Field& v, const GeometryState& geom) {
    std::array<Vec3Field, 3> grad;
    for (int i = 0; i < 3; ++i) grad[i] = gradient(sp, v[i]);
    Vec3Field out = make_vec3(sp.grid());
    kernels::parallel::ale_advection(v, grad, geom.E[2][0], geom.E[2][1], geom.E[2][2], geom.psi_t, out);
    for (auto& c : out) c = sp.dealiased(c);
    return out;
}

Vec3Field transposed_gradient(const Spectral& sp, const VolumeField& q, const GeometryState& geom) {
    const auto g = gradient(sp, q);
    Vec3Field out = g;
    for (std::size_t n = 0; n < q.size(); ++n) {
        out[0][n] = g[0][n] + geom.E[2][0][n] * g[2][n];
        out[1][n] = g[1][n] + geom.E[2][1][n] * g[2][n];
        out[2][n] = geom.E[2][2][n] * g[2][n];
    }
    for (auto& c : out) c = sp.dealiased(c);
    return out;
}

}  // namespace kch
