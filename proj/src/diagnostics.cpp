#include "kch/diagnostics.hpp"

#include "kch/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kch {

const std::array<std::string_view, NormReport::kCount>& NormReport::labels() {
    static const std::array<std::string_view, kCount> names = {
        "v_h35",         "w_h5",          "wt_h3",   "q_h25",   "psi_h55",      "psit_h35",           "E_h45",
        "E_minus_I_sup", "J_minus_1_sup", "kinetic", "koiter",  "total_energy", "interface_residual", "piola_residual"};
    return names;
}

std::array<double, NormReport::kCount> NormReport::values() const {
    return {v_h35,         w_h5,          wt_h3,   q_h25,  psi_h55,      psit_h35,           E_h45,
            E_minus_I_sup, J_minus_1_sup, kinetic, koiter, total_energy, interface_residual, piola_residual};
}

double NormReport::get(std::string_view label) const {
    const auto& names = labels();
    const auto vals = values();
    for (std::size_t n = 0; n < kCount; ++n)
        if (names[n] == label) return vals[n];
    throw std::invalid_argument("NormReport: unknown label " + std::string(label));
}

NormReport energy_report(const Spectral& sp, const SystemState& s, const PlateParams& params) {
    const auto& g = sp.grid();
    const auto& geom = s.geom;
    NormReport r;
    r.v_h35 = vector_proxy(sp, s.fluid.v, 3.5, 2);
    r.w_h5 = sobolev_proxy(sp, s.plate.w, 5.0);
    r.wt_h3 = sobolev_proxy(sp, s.plate.w_t, 3.0);
    r.q_h25 = s.fluid.q.size() ? sobolev_proxy(sp, s.fluid.q, 2.5, 2) : 0.0;

    VolumeField disp = geom.psi;
    for (int k = 0; k < g.n3; ++k)
        for (double& x : disp.plane(k)) x -= g.x3(k);
    r.psi_h55 = sobolev_proxy(sp, disp, 5.5, 2);
    r.psit_h35 = sobolev_proxy(sp, geom.psi_t, 3.5, 2);

    double e_sum = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            VolumeField f = geom.E[a][b];
            if (a == b) f += VolumeField(g, -1.0);
            const double p = sobolev_proxy(sp, f, 4.5, 2);
            e_sum += p * p;
        }
    r.E_h45 = std::sqrt(e_sum);
    r.E_minus_I_sup = geom.smallness.E_minus_I_sup;
    r.J_minus_1_sup = geom.smallness.J_minus_1_sup;

    VolumeField ke = product(s.fluid.v[0], s.fluid.v[0]);
    ke += product(s.fluid.v[1], s.fluid.v[1]);
    ke += product(s.fluid.v[2], s.fluid.v[2]);
    r.kinetic = 0.5 * volume_integral(product(geom.J, ke));
    r.koiter = koiter_energy(sp, s.plate.w, params);
    r.total_energy = r.kinetic + 0.5 * params.inertia() * surface_inner(s.plate.w_t, s.plate.w_t) + r.koiter;
    r.interface_residual = interface_residual(s.fluid.v, geom, s.plate.w_t);
    const auto piola = piola_residual(sp, geom.F);
    r.piola_residual = *std::max_element(piola.begin(), piola.end());
    return r;
}

double apriori_baseline(const NormReport& initial) { return std::max({initial.v_h35, initial.wt_h3, 1.0}); }

AprioriResult apriori_monitor(const NormReport& report, double M, double C0) {
    AprioriResult out;
    out.bound = C0 * M;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < kAprioriLabels.size(); ++n) {
        out.margins[n] = out.bound - report.get(kAprioriLabels[n]);
        if (out.margins[n] < smallest) {
            smallest = out.margins[n];
            out.worst = kAprioriLabels[n];
        }
        if (!(out.margins[n] >= 0.0)) out.passed = false;
    }
    return out;
}

}  // namespace kch
