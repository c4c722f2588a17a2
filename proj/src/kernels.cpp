#include "kch/kernels.hpp"

#include <Eigen/Dense>

#include <map>
#include <variant>

#ifdef KCH_HAVE_OPENMP
#include <omp.h>
#endif

namespace kch::kernels {

BandModes BandModes::of(const Spectral& sp) {
    BandModes modes;
    const auto& g = sp.grid();
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.nh(); ++i)
            if (sp.in_band(i, j)) {
                modes.i.push_back(i);
                modes.j.push_back(j);
                modes.laplacian.push_back(sp.laplacian_symbol(i, j));
            }
    return modes;
}

void robin_neumann_column(const Complex* rhs, Complex* out, std::size_t stride, int n3, double dz, double K,
                          double kappa) {
    // Tridiagonal rows after elimination: lower[k] q[k-1] + diag[k] q[k] + upper[k] q[k+1] = d[k].
    constexpr int kMax = 1024;
    double cprime[kMax];
    Complex dprime[kMax];
    const int n = n3;
    const double h2 = dz * dz;
    const double kd = K * h2;
    auto r = [&](int k) { return rhs[static_cast<std::size_t>(k) * stride]; };

    // Row 0: (-3 q0 + 4 q1 - q2)/(2dz) = b, with q2 eliminated through interior row 1.
    double diag = -2.0;
    double upper = 2.0 - kd;
    Complex d = 2.0 * dz * r(0) + h2 * r(1);
    cprime[0] = upper / diag;
    dprime[0] = d / diag;
    for (int k = 1; k < n - 1; ++k) {
        const double lower = 1.0;
        diag = -2.0 - kd;
        upper = 1.0;
        d = h2 * r(k);
        const double denom = diag - lower * cprime[k - 1];
        cprime[k] = upper / denom;
        dprime[k] = (d - lower * dprime[k - 1]) / denom;
    }
    // Row n-1: (3 q_{n-1} - 4 q_{n-2} + q_{n-3})/(2dz) + kappa q_{n-1} = t, q_{n-3} eliminated.
    {
        const double lower = -2.0 + kd;
        diag = 2.0 + 2.0 * dz * kappa;
        d = 2.0 * dz * r(n - 1) - h2 * r(n - 2);
        const double denom = diag - lower * cprime[n - 2];
        dprime[n - 1] = (d - lower * dprime[n - 2]) / denom;
    }
    out[static_cast<std::size_t>(n - 1) * stride] = dprime[n - 1];
    for (int k = n - 2; k >= 0; --k) {
        const Complex next = out[static_cast<std::size_t>(k + 1) * stride];
        out[static_cast<std::size_t>(k) * stride] = dprime[k] - cprime[k] * next;
    }
}

// ---------------------------------------------------------------------------

struct DenseModeSolver::Impl {
    using Regular = Eigen::PartialPivLU<Eigen::MatrixXd>;
    using Singular = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>;
    using Factor = std::variant<Regular, Singular>;

    std::map<double, std::size_t> by_symbol;
    std::vector<Factor> factors;
    std::vector<std::size_t> mode_factor;
};

DenseModeSolver::DenseModeSolver(const BandModes& modes, int n3, const Builder& build) : n3_(n3) {
    for (std::size_t m = 0; m < modes.size(); ++m) add_factor(modes.laplacian[m], build(modes.laplacian[m]));
}

DenseModeSolver::~DenseModeSolver() = default;
DenseModeSolver::DenseModeSolver(DenseModeSolver&&) noexcept = default;
DenseModeSolver& DenseModeSolver::operator=(DenseModeSolver&&) noexcept = default;

void DenseModeSolver::add_factor(double K, const std::vector<double>& rowmajor) {
    if (!impl_) impl_ = std::make_unique<Impl>();
    auto it = impl_->by_symbol.find(K);
    if (it == impl_->by_symbol.end()) {
        Eigen::MatrixXd a(n3_, n3_);
        for (int r = 0; r < n3_; ++r)
            for (int c = 0; c < n3_; ++c) a(r, c) = rowmajor[static_cast<std::size_t>(r) * n3_ + c];
        Impl::Singular cod(a);
        if (cod.rank() < n3_) {
            impl_->factors.emplace_back(std::move(cod));
        } else {
            impl_->factors.emplace_back(Impl::Regular(a));
        }
        it = impl_->by_symbol.emplace(K, impl_->factors.size() - 1).first;
    }
    impl_->mode_factor.push_back(it->second);
}

void DenseModeSolver::solve_column(std::size_t mode, const Complex* rhs, Complex* out, std::size_t stride) const {
    Eigen::MatrixXd b(n3_, 2);
    for (int k = 0; k < n3_; ++k) {
        const Complex c = rhs[static_cast<std::size_t>(k) * stride];
        b(k, 0) = c.real();
        b(k, 1) = c.imag();
    }
    const auto& factor = impl_->factors[impl_->mode_factor[mode]];
    Eigen::MatrixXd x = std::visit([&](const auto& f) -> Eigen::MatrixXd { return f.solve(b); }, factor);
    for (int k = 0; k < n3_; ++k) out[static_cast<std::size_t>(k) * stride] = Complex(x(k, 0), x(k, 1));
}

// ---------------------------------------------------------------------------

namespace {

inline void advection_point(std::size_t m, const Vec3Field& v, const std::array<Vec3Field, 3>& grad,
                            const VolumeField& e31, const VolumeField& e32, const VolumeField& e33,
                            const VolumeField& psi_t, Vec3Field& out) {
    const double v1 = v[0][m];
    const double v2 = v[1][m];
    const double w3 = e33[m] * (v[2][m] - psi_t[m]);
    const double a31 = e31[m];
    const double a32 = e32[m];
    for (int i = 0; i < 3; ++i) {
        const double g3 = grad[i][2][m];
        out[i][m] = v1 * (grad[i][0][m] + a31 * g3) + v2 * (grad[i][1][m] + a32 * g3) + w3 * g3;
    }
}

}  // namespace

namespace serial {

void robin_neumann_solve(const BandModes& modes, const SpectralField& rhs, SpectralField& out, double dz,
                         double kappa) {
    const std::size_t stride = rhs.plane_size();
    const int nh = rhs.nh();
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const std::size_t off = static_cast<std::size_t>(modes.j[m]) * nh + modes.i[m];
        robin_neumann_column(rhs.data() + off, out.data() + off, stride, rhs.planes(), dz, modes.laplacian[m], kappa);
    }
}

void dense_solve(const BandModes& modes, const DenseModeSolver& solver, const SpectralField& rhs,
                 SpectralField& out) {
    const std::size_t stride = rhs.plane_size();
    const int nh = rhs.nh();
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const std::size_t off = static_cast<std::size_t>(modes.j[m]) * nh + modes.i[m];
        solver.solve_column(m, rhs.data() + off, out.data() + off, stride);
    }
}

void ale_advection(const Vec3Field& v, const std::array<Vec3Field, 3>& grad, const VolumeField& e31,
                   const VolumeField& e32, const VolumeField& e33, const VolumeField& psi_t, Vec3Field& out) {
    const std::size_t n = v[0].size();
    for (std::size_t m = 0; m < n; ++m) advection_point(m, v, grad, e31, e32, e33, psi_t, out);
}

}  // namespace serial

namespace parallel {

void robin_neumann_solve(const BandModes& modes, const SpectralField& rhs, SpectralField& out, double dz,
                         double kappa) {
    const std::size_t stride = rhs.plane_size();
    const int nh = rhs.nh();
    const auto count = static_cast<std::ptrdiff_t>(modes.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < count; ++m) {
        const std::size_t off = static_cast<std::size_t>(modes.j[m]) * nh + modes.i[m];
        robin_neumann_column(rhs.data() + off, out.data() + off, stride, rhs.planes(), dz, modes.laplacian[m], kappa);
    }
}

void dense_solve(const BandModes& modes, const DenseModeSolver& solver, const SpectralField& rhs,
                 SpectralField& out) {
    const std::size_t stride = rhs.plane_size();
    const int nh = rhs.nh();
    const auto count = static_cast<std::ptrdiff_t>(modes.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < count; ++m) {
        const std::size_t off = static_cast<std::size_t>(modes.j[m]) * nh + modes.i[m];
        solver.solve_column(static_cast<std::size_t>(m), rhs.data() + off, out.data() + off, stride);
    }
}

void ale_advection(const Vec3Field& v, const std::array<Vec3Field, 3>& grad, const VolumeField& e31,
                   const VolumeField& e32, const VolumeField& e33, const VolumeField& psi_t, Vec3Field& out) {
    const auto n = static_cast<std::ptrdiff_t>(v[0].size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < n; ++m)
        advection_point(static_cast<std::size_t>(m), v, grad, e31, e32, e33, psi_t, out);
}

}  // namespace parallel

void set_thread_limit(int threads) {
#ifdef KCH_HAVE_OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int thread_limit() {
#ifdef KCH_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace kch::kernels
