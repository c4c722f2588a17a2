#pragma once

#include "kch/fluid.hpp"
#include "kch/geometry.hpp"
#include "kch/plate.hpp"

namespace kch {

/// (v, q, w, w_t) at one time, with the frame built from (w, w_t).
struct SystemState {
    PlateState plate;
    FluidState fluid;
    GeometryState geom;
    double t = 0.0;
};

}  // namespace kch
