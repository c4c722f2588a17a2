#pragma once

// Data-parallel inner loops of the solver. Every kernel exists twice: a plain
// serial reference (kept for testing and benchmarking) and an OpenMP version
// used by the solver modules. The two must agree bit for bit; every per-point
// or per-mode result is computed by exactly one thread, with no reductions.

#include "kch/grid.hpp"
#include "kch/spectral.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace kch::kernels {

/// Horizontal-mode index list restricted to the dealiasing band.
struct BandModes {
    std::vector<int> i;
    std::vector<int> j;
    std::vector<double> laplacian;  // deriv1^2 + deriv2^2

    static BandModes of(const Spectral& sp);
    std::size_t size() const { return i.size(); }
};

/// Per-mode vertical two-point problem on one column of spectral coefficients:
///   rows 1..n3-2 : (q[k-1] - 2 q[k] + q[k+1]) / dz^2 - K q[k] = rhs[k]
///   row 0        : one-sided D3 q                             = rhs[0]
///   row n3-1     : one-sided D3 q + kappa q                   = rhs[n3-1]
/// Solved by eliminating the third boundary-stencil entry against the adjacent
/// interior row and running the Thomas algorithm. Requires K > 0 or kappa > 0.
void robin_neumann_column(const Complex* rhs, Complex* out, std::size_t stride, int n3, double dz, double K,
                          double kappa);

/// Dense per-mode operators, factored once per distinct Laplacian symbol.
class DenseModeSolver {
public:
    /// `build(K)` must return the n3 x n3 row-major matrix for symbol K.
    using Builder = std::function<std::vector<double>(double)>;
    DenseModeSolver(const BandModes& modes, int n3, const Builder& build);
    ~DenseModeSolver();
    DenseModeSolver(DenseModeSolver&&) noexcept;
    DenseModeSolver& operator=(DenseModeSolver&&) noexcept;

    /// Solves column m (real and imaginary parts as two right-hand sides).
    /// Singular factors return the minimum-norm least-squares solution.
    void solve_column(std::size_t mode, const Complex* rhs, Complex* out, std::size_t stride) const;
    int n3() const { return n3_; }

private:
    void add_factor(double K, const std::vector<double>& rowmajor);
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int n3_ = 0;
};

namespace serial {

void robin_neumann_solve(const BandModes& modes, const SpectralField& rhs, SpectralField& out, double dz,
                         double kappa);
void dense_solve(const BandModes& modes, const DenseModeSolver& solver, const SpectralField& rhs,
                 SpectralField& out);

/// ALE advective acceleration
///   A_i = v1 (d1 v_i + e31 d3 v_i) + v2 (d2 v_i + e32 d3 v_i) + e33 (v3 - psi_t) d3 v_i
/// where grad[i][j] holds d_j v_i.
void ale_advection(const Vec3Field& v, const std::array<Vec3Field, 3>& grad, const VolumeField& e31,
                   const VolumeField& e32, const VolumeField& e33, const VolumeField& psi_t, Vec3Field& out);

}  // namespace serial

namespace parallel {

void robin_neumann_solve(const BandModes& modes, const SpectralField& rhs, SpectralField& out, double dz,
                         double kappa);
void dense_solve(const BandModes& modes, const DenseModeSolver& solver, const SpectralField& rhs,
                 SpectralField& out);
void ale_advection(const Vec3Field& v, const std::array<Vec3Field, 3>& grad, const VolumeField& e31,
                   const VolumeField& e32, const VolumeField& e33, const VolumeField& psi_t, Vec3Field& out);

}  // namespace parallel

/// Caps the OpenMP team size (KCH_THREADS); no-op without OpenMP.
void set_thread_limit(int threads);
int thread_limit();

}  // namespace kch::kernels
