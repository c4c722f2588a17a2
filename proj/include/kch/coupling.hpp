#pragma once

#include "kch/diagnostics.hpp"
#include "kch/presets.hpp"
#include "kch/state.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kch {

struct PicardConfig {
    double tol = 1e-10;
    int max_iter = 30;
    double relaxation = 1.0;
    /// absolute floor under the norms that make the differences relative
    double floor = 1e-14;
};

struct SolverConfig {
    PlateParams plate;
    FluidConfig fluid;
    PicardConfig picard;
    double epsilon = 0.5;  // smallness threshold for |E-I|, |F-I|, |J-1|
    double c_min = kDefaultCmin;
};

// ---------------------------------------------------------------------------

struct CompatibilityItem {
    std::string name;
    double residual = 0.0;
    bool passed = true;
};

struct CompatibilityReport {
    std::array<CompatibilityItem, 6> items;
    double tol = 1e-10;
    bool all_passed() const;
    std::string summary() const;
};

/// Items: regularity (finite, band-limited), w(0) = 0, mean w1 = 0, discrete
/// divergence of v0, v0_3 = 0 on the bottom, w1 = v0_3 on the top.
CompatibilityReport check_compatibility(const Spectral& sp, const Vec3Field& v0, const SurfaceField& w0,
                                        const SurfaceField& w1, double tol = 1e-10);
/// Throws CompatibilityError naming every failed item.
void require_compatible(const CompatibilityReport& report);

/// State at t = 0 with the frame of (w0, w1) and the matching pressure.
SystemState initial_state(const Spectral& sp, const InitialData& data, const SolverConfig& cfg);

// ---------------------------------------------------------------------------

struct PicardIterate {
    double V = 0.0;  // relative L2 change of v
    double Q = 0.0;  // relative L2 change of q
    double W = 0.0;  // relative H2-proxy change of (w, w_t)
};

struct PicardLog {
    std::vector<PicardIterate> iterates;
    bool converged = false;
    int iterations() const { return static_cast<int>(iterates.size()); }
    /// largest W(n+1)/W(n) over the iteration (0 with fewer than two nonzero W)
    double max_ratio() const;
};

struct PicardResult {
    SystemState state;
    PicardLog log;
    // stage data of the accepted fluid step, for the vorticity transport
    Vec3Field v_mid;
    GeometryState geom_mid;
    int pressure_iterations = 0;
    Projector::Result projection;
};

/// One time step: guess the plate with the previous pressure, then repeat
/// (frames at the midpoint and at n+1, fluid step, normalized pressure, plate step,
/// relaxation) until V, Q and W fall below tol.
PicardResult picard_timestep(const Spectral& sp, const Projector& projector, const SystemState& state,
                             const SolverConfig& cfg, double dt);

// ---------------------------------------------------------------------------

struct TimeConfig {
    double dt = 5e-4;
    double t_final = 0.1;
    int output_every = 10;
    int steps() const;
};

struct OutputRow {
    double t = 0.0;
    NormReport report;
};

struct RunResult {
    bool ok = true;
    std::string failure;         // message of the guard that stopped the run
    int exit_code = 0;           // 0 or the failure class
    std::optional<double> trip_time;
    int steps = 0;
    std::vector<OutputRow> rows;
    int max_picard_iterations = 0;
    double max_picard_ratio = 0.0;
    double max_interface_residual = 0.0;
    double max_divergence = 0.0;  // after cleanup, interior
    double dissipated = 0.0;      // nu int |grad w_t|^2 dt (midpoint rule)
    SystemState final_state;
};

/// Called after each step with the step index (1-based) and the Picard result.
using StepObserver = std::function<void(int, const PicardResult&)>;
/// Called at every output time (including t = 0).
using OutputObserver = std::function<void(const OutputRow&, const SystemState&)>;

RunResult run_simulation(const Spectral& sp, const SystemState& initial, const SolverConfig& cfg,
                         const TimeConfig& time, const OutputObserver& on_output = {},
                         const StepObserver& on_step = {});

struct SweepRow {
    double nu = 0.0;
    bool ok = true;
    std::string failure;
    /// max over output times of each NormReport column
    std::array<double, NormReport::kCount> max_values{};
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// max/min over the successful rows of each column (1 when the column is zero throughout)
    std::array<double, NormReport::kCount> spread{};
};

/// Runs the same initial data once per nu; a failed run is recorded and the sweep continues.
SweepResult nu_sweep(const Spectral& sp, const InitialData& data, const SolverConfig& cfg, const TimeConfig& time,
                     const std::vector<double>& nu_list);

}  // namespace kch
