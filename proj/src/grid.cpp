#include "weakslit/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "weakslit/errors.hpp"

namespace weakslit {

SimGrid::SimGrid(std::size_t n_points, double x_extent) : n_(n_points), extent_(x_extent) {
    if (n_points < 8 || !std::has_single_bit(n_points)) {
        throw ConfigError(fmt::format("grid: n_points must be a power of two >= 8, got {}", n_points));
    }
    if (!(x_extent > 0.0) || !std::isfinite(x_extent)) {
        throw ConfigError(fmt::format("grid: x_extent must be positive, got {}", x_extent));
    }
}

std::size_t SimGrid::nearest_p_index(double p) const noexcept {
    const double k = std::round(p / dp()) + static_cast<double>(n_ / 2);
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n_ - 1)));
}

RealSamples SimGrid::x_samples() const {
    RealSamples out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
    return out;
}

RealSamples SimGrid::p_samples() const {
    RealSamples out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = p(k);
    return out;
}

SimGrid make_grid(std::size_t n_points, double x_extent) { return SimGrid(n_points, x_extent); }

void validate(const LabFrame& lab) {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(lab.wavelength)) throw ConfigError("lab.wavelength must be positive");
    if (!positive(lab.focal_length)) throw ConfigError("lab.focal_length must be positive");
    if (!positive(lab.slit_separation)) throw ConfigError("lab.slit_separation must be positive");
}

double focal_plane_position(double p, const LabFrame& lab) {
    const double p_si = p * lab.hbar_over_s();
    return (lab.focal_length / kLightSpeed) * (p_si / lab.effective_mass());
}

double momentum_at_focal_position(double x, const LabFrame& lab) {
    const double p_si = x * lab.effective_mass() * kLightSpeed / lab.focal_length;
    return p_si / lab.hbar_over_s();
}

}  // namespace weakslit
