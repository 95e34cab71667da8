#pragma once

#include <array>
#include <variant>

#include "weakslit/grid.hpp"

namespace weakslit {

struct SharpEdges {
    friend bool operator==(const SharpEdges&, const SharpEdges&) = default;
};

// Error-function edges: each aperture edge is blurred over the length scale `scale`.
struct GaussianEdges {
    double scale;
    friend bool operator==(const GaussianEdges&, const GaussianEdges&) = default;
};

using EdgeProfile = std::variant<SharpEdges, GaussianEdges>;

// Two equal slits centred at -+separation/2, lengths in internal units (s = 1
// for the default frame, but any consistent length unit works).
struct SlitGeometry {
    double width = 0.5;
    double separation = 1.0;
    EdgeProfile edges = SharpEdges{};
    // Illumination amplitude of the {left, right} slit before normalisation.
    std::array<double, 2> amplitudes{1.0, 1.0};
};

// Throws GeometryError unless separation > width > 0.
void validate(const SlitGeometry& geom);

// Default smooth edge scale, one tenth of the slit width.
GaussianEdges default_smooth_edges(const SlitGeometry& geom);

enum class Slit { left, right };

// Two polarization components (H, V) of a transverse wavefunction on x.
// Branch outputs of a measurement channel reuse this type unnormalised.
struct TransverseState {
    SimGrid grid;
    ComplexSamples h;
    ComplexSamples v;
    // True when the spatial profile has discontinuities (sharp slit edges),
    // in which case momentum moments are not finite.
    bool sharp_edges = false;

    explicit TransverseState(const SimGrid& g)
        : grid(g), h(g.size()), v(g.size()) {}

    double norm2() const;
    // |psi_H|^2 + |psi_V|^2 per x sample.
    RealSamples density() const;
};

TransverseState build_double_slit(const SlitGeometry& geom, const SimGrid& grid);
TransverseState build_single_slit(const SlitGeometry& geom, const SimGrid& grid, Slit which);

// H-polarized Gaussian in momentum, amplitude exp(-(p - p0)^2 / (2 width^2)).
// width must be at least four momentum bins.
TransverseState build_momentum_peak(double p0, double width, const SimGrid& grid);

// H-polarized Gaussian in position, amplitude exp(-(x - x0)^2 / (2 width^2)).
TransverseState build_gaussian(double x0, double width, const SimGrid& grid);

}  // namespace weakslit
