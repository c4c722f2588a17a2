#pragma once

#include "kch/state.hpp"

#include <array>
#include <string>
#include <string_view>

namespace kch {

/// Monitored quantities in their fixed serialization order.
struct NormReport {
    static constexpr std::size_t kCount = 14;
    static const std::array<std::string_view, kCount>& labels();

    double v_h35 = 0.0;
    double w_h5 = 0.0;
    double wt_h3 = 0.0;
    double q_h25 = 0.0;
    double psi_h55 = 0.0;   // of psi - x3
    double psit_h35 = 0.0;
    double E_h45 = 0.0;     // of E - I
    double E_minus_I_sup = 0.0;
    double J_minus_1_sup = 0.0;
    double kinetic = 0.0;   // (1/2) int J |v|^2
    double koiter = 0.0;
    double total_energy = 0.0;  // kinetic + inertia/2 |w_t|^2 + koiter
    double interface_residual = 0.0;
    double piola_residual = 0.0;

    std::array<double, kCount> values() const;
    double get(std::string_view label) const;
};

NormReport energy_report(const Spectral& sp, const SystemState& state, const PlateParams& params);

/// Quantities bounded in terms of M by the a priori estimate.
inline constexpr std::array<std::string_view, 7> kAprioriLabels = {"v_h35",    "w_h5",     "wt_h3", "q_h25",
                                                                   "psi_h55", "psit_h35", "E_h45"};

struct AprioriResult {
    bool passed = true;
    double bound = 0.0;  // C0 * M
    std::array<double, kAprioriLabels.size()> margins{};  // bound - value
    std::string worst;   // label with the smallest margin
};

/// M = max(v_h35(0), wt_h3(0), 1).
double apriori_baseline(const NormReport& initial);
AprioriResult apriori_monitor(const NormReport& report, double M, double C0 = 10.0);

}  // namespace kch
