#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace weakslit {

using cplx = std::complex<double>;
using ComplexSamples = std::vector<cplx>;
using RealSamples = std::vector<double>;

// Internal units: hbar = 1 and lengths measured in slit separations s, so a
// momentum of h/s is 2*pi and hbar/s is 1.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPlanck = 6.62607015e-34;   // J s
inline constexpr double kLightSpeed = 299792458.0;  // m / s

// Uniform, centered position grid and its conjugate momentum grid.
//   x_j = (j - N/2) dx,  p_k = (k - N/2) dp,  dx * dp * N = 2 pi
class SimGrid {
public:
    SimGrid(std::size_t n_points, double x_extent);

    std::size_t size() const noexcept { return n_; }
    double x_extent() const noexcept { return extent_; }
    double dx() const noexcept { return extent_ / static_cast<double>(n_); }
    double dp() const noexcept { return kTwoPi / extent_; }

    double x(std::size_t j) const noexcept { return offset(j) * dx(); }
    double p(std::size_t k) const noexcept { return offset(k) * dp(); }
    double x_min() const noexcept { return x(0); }
    double x_max() const noexcept { return x(n_ - 1); }
    double p_min() const noexcept { return p(0); }
    double p_max() const noexcept { return p(n_ - 1); }

    // Signed sample offset from the centre sample N/2.
    long offset(std::size_t j) const noexcept {
        return static_cast<long>(j) - static_cast<long>(n_ / 2);
    }
    // Nearest momentum sample index, clamped to the grid.
    std::size_t nearest_p_index(double p) const noexcept;

    RealSamples x_samples() const;
    RealSamples p_samples() const;

    friend bool operator==(const SimGrid&, const SimGrid&) = default;

private:
    std::size_t n_;
    double extent_;
};

// n_points must be a power of two >= 8 and x_extent positive.
SimGrid make_grid(std::size_t n_points, double x_extent);

// Optical bench used to express internal quantities in laboratory units.
// All lengths are metres.
struct LabFrame {
    double wavelength;
    double focal_length;
    double slit_separation;

    // Transverse motion behind the slits is that of a free particle of this mass.
    double effective_mass() const noexcept { return kPlanck / (kLightSpeed * wavelength); }
    double hbar_over_s() const noexcept { return kPlanck / kTwoPi / slit_separation; }
};

void validate(const LabFrame& lab);

// Position in the Fourier plane of a lens of focal length f, x = (f/c)(p/m),
// for an internal momentum p (units hbar/s). Returns metres.
double focal_plane_position(double p, const LabFrame& lab);
// Inverse of focal_plane_position.
double momentum_at_focal_position(double x, const LabFrame& lab);

}  // namespace weakslit
