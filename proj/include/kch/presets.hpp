#pragma once

#include "kch/grid.hpp"
#include "kch/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kch {

/// Initial data (v0, w0, w1) of a registered preset.
struct InitialData {
    Vec3Field v0;
    SurfaceField w0;
    SurfaceField w1;
};

struct PresetParams {
    std::string name = "zero";
    double amplitude = 1e-3;  // plate mode (single_mode_plate) or max |v| (random_bandlimited)
    double swirl = 0.0;       // x3-independent horizontal flow added by single_mode_plate
    double shear = 1.0;       // U of shear_flow
    std::uint64_t seed = 1;
};

const std::vector<std::string>& preset_names();

/// Velocity fields are built as discrete curls of a vector potential, so their
/// flux-form divergence vanishes at interior nodes to roundoff. Throws ConfigError
/// for unknown names.
InitialData make_initial_data(const Spectral& sp, const PresetParams& p);

}  // namespace kch
