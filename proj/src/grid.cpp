#include "kch/grid.hpp"

#include "kch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kch {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid Grid::make(int n1, int n2, int n3) {
    if (!is_power_of_two(n1) || n1 < 8)
        throw ConfigError("grid: N1 must be a power of two >= 8 (got " + std::to_string(n1) + ")");
    if (!is_power_of_two(n2) || n2 < 8)
        throw ConfigError("grid: N2 must be a power of two >= 8 (got " + std::to_string(n2) + ")");
    if (n3 < 9 || n3 > 1024) throw ConfigError("grid: N3 must lie in [9, 1024] (got " + std::to_string(n3) + ")");
    return Grid{n1, n2, n3};
}

double PlaneStack::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

bool PlaneStack::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

void PlaneStack::check_same_shape(const PlaneStack& other) const {
    if (n1_ != other.n1_ || n2_ != other.n2_ || planes_ != other.planes_)
        throw std::invalid_argument("field shape mismatch");
}

void PlaneStack::add_scaled(const PlaneStack& other, double s) {
    check_same_shape(other);
    const std::size_t n = data_.size();
    for (std::size_t m = 0; m < n; ++m) data_[m] += s * other.data_[m];
}

void PlaneStack::scale(double s) {
    for (double& x : data_) x *= s;
}

double SurfaceField::mean() const {
    double sum = 0.0;
    for (double x : data_) sum += x;
    return data_.empty() ? 0.0 : sum / static_cast<double>(data_.size());
}

SurfaceField VolumeField::trace(int k) const {
    SurfaceField s(n1_, n2_);
    auto src = plane(k);
    std::copy(src.begin(), src.end(), s.data());
    return s;
}

void VolumeField::set_plane(int k, const SurfaceField& s) {
    if (s.n1() != n1_ || s.n2() != n2_) throw std::invalid_argument("plane shape mismatch");
    std::copy(s.values().begin(), s.values().end(), plane(k).begin());
}

SurfaceField operator+(SurfaceField a, const SurfaceField& b) { return a += b; }
SurfaceField operator-(SurfaceField a, const SurfaceField& b) { return a -= b; }
SurfaceField operator*(double s, SurfaceField a) { return a *= s; }
VolumeField operator+(VolumeField a, const VolumeField& b) { return a += b; }
VolumeField operator-(VolumeField a, const VolumeField& b) { return a -= b; }
VolumeField operator*(double s, VolumeField a) { return a *= s; }

Vec3Field make_vec3(const Grid& g, double fill) {
    return {VolumeField(g, fill), VolumeField(g, fill), VolumeField(g, fill)};
}

}  // namespace kch
