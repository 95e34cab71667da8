#pragma once

#include <vector>

#include "weakslit/weak_values.hpp"

namespace weakslit {

// Vertical pointer used to tag photons inside the sliver window. Lengths in
// metres: sigma is the 1/e^2 intensity half-width of the beam in y,
// displacement the tag shift D, sliver_width the width delta of the glass
// sliver in the first Fourier plane.
struct PointerSpec {
    double sigma = 1.01e-3;
    double displacement = 0.14e-3;
    double sliver_width = 1.77e-3;
    int window_index = -1;

    double ratio() const noexcept { return displacement / sigma; }
};

void validate(const PointerSpec& spec);

// Momentum window selected by a sliver of width delta at x_i = n * delta.
MomentumWindow sliver_window(const PointerSpec& spec, const LabFrame& lab);

// Exact joint intensity I(p_f, y) = sum_c |A_u,c(p_f) G_0(y) + A_t,c(p_f) G_D(y)|^2,
// with G_D the pointer amplitude centred at D. Stored through its three
// p_f-dependent quadratic forms; y is handled analytically.
struct IntensityMap {
    SimGrid grid;
    MomentumWindow window;
    double sigma = 0.0;         // metres
    double displacement = 0.0;  // metres
    RealSamples untagged;       // sum_c |A_u,c|^2
    RealSamples tagged;         // sum_c |A_t,c|^2
    RealSamples cross;          // sum_c Re(A_u,c conj(A_t,c))

    double ratio() const noexcept { return displacement / sigma; }
    // <G_0 | G_D> = exp(-D^2 / (2 sigma^2)).
    double overlap() const;
    double intensity(std::size_t k, double y) const;
    // Integral of I(p_f, y) over y.
    double marginal(std::size_t k) const;
    // Integral of y I(p_f, y) over y.
    double first_moment(std::size_t k) const;
};

IntensityMap run_tagged(const TransverseState& state, const MeasurementChannel& ch, const PointerSpec& pointer,
                        const LabFrame& lab, Eraser eraser = Eraser::none);

// d(p_f) / D from the y-centroid of each p_f column; undefined where the
// column intensity is below kUndefinedThreshold of the maximum.
WvpCurve estimate_wvp(const IntensityMap& map);

struct ConvergenceRow {
    double ratio = 0.0;
    double max_abs_deviation = 0.0;
    double rms_deviation = 0.0;
    double p_at_max = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;  // in the order the ratios were given
    bool monotonic = false;            // deviation shrinks with every smaller ratio
    double small_ratio_slope = 0.0;    // log-log slope over the two smallest ratios
};

// Deviation of the pointer estimate from conditional_wvp as D/sigma shrinks.
// sigma is taken from `base`; every ratio must lie in (0, 1).
ConvergenceTable convergence_sweep(const TransverseState& state, const MeasurementChannel& ch,
                                   const PointerSpec& base, const LabFrame& lab, const std::vector<double>& ratios);

}  // namespace weakslit
