#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weakslit/channels.hpp"

namespace weakslit {

// Polarizer placed after the which-way marker. plus45 projects on (H + V)/sqrt2,
// minus45 on (H - V)/sqrt2; none traces the polarization.
enum class Eraser { none, plus45, minus45 };

std::string to_string(Eraser e);
Eraser eraser_from_string(const std::string& s);

// Weak-measurement window n: momenta in [n*width - width/2, n*width + width/2).
struct MomentumWindow {
    int index = 0;
    double width = 1.0;

    double center() const noexcept { return index * width; }
    // Shared edges of neighbouring windows are bit-identical.
    double lo() const noexcept { return (index - 0.5) * width; }
    double hi() const noexcept { return (index + 0.5) * width; }
    bool contains(double p) const noexcept { return p >= lo() && p < hi(); }
};

// Range of window indices [n_min, n_max] sharing one width.
struct WindowSet {
    int n_min = -7;
    int n_max = 7;
    double width = 1.0;

    std::vector<MomentumWindow> windows() const;
};

// Smallest symmetric window set whose union covers every momentum sample.
WindowSet full_tiling(const SimGrid& grid, double width);

// Throws ResolutionError when the window spans fewer than two momentum bins.
void validate(const MomentumWindow& win, const SimGrid& grid);

// Pi_win psi: momentum amplitudes multiplied by the window indicator.
TransverseState window_project(const TransverseState& state, const MomentumWindow& win);

// Momentum-space outputs of a channel, one array per (coherence group,
// detected polarization component). For Eraser::none each group contributes its
// H and V components; with a polarizer each group contributes one projection.
std::vector<ComplexSamples> propagate(const TransverseState& state, const MeasurementChannel& ch,
                                      Eraser eraser);

// P(p_f): branch-summed momentum density after the channel (or P(p_i) without
// one), normalised to unit mass.
RealSamples momentum_distribution(const TransverseState& state,
                                  const MeasurementChannel* ch = nullptr);

// Unnormalised density of p_f within the eraser outcome (total density for Eraser::none).
RealSamples subset_distribution(const TransverseState& state, const MeasurementChannel& ch,
                                Eraser eraser);

// J(p_f) = P_wv(p_i | p_f) P(p_f) = Re sum_c chi~_c(p_f) conj(psi~_c(p_f)),
// with psi_c the channel outputs of psi and chi_c those of Pi_win psi.
RealSamples joint_wvp(const TransverseState& state, const MeasurementChannel& ch,
                      const MomentumWindow& win, Eraser eraser);

// Relative threshold below which P(p_f) is too small for a conditional value.
inline constexpr double kUndefinedThreshold = 1e-6;

struct WvpCurve {
    SimGrid grid;
    MomentumWindow window;
    Eraser eraser = Eraser::none;
    RealSamples values;   // J / P where defined, NaN elsewhere
    RealSamples joint;    // J
    RealSamples density;  // P(p_f) of the selected subset
    std::vector<bool> defined;
};

WvpCurve conditional_wvp(const TransverseState& state, const MeasurementChannel& ch,
                         const MomentumWindow& win, Eraser eraser);

// P_wv(q) on q_m = m * dp for m in [m_min, m_min + size). Values may be negative.
struct TransferDistribution {
    double dq = 0.0;
    long m_min = 0;
    RealSamples density;
    std::vector<MomentumWindow> windows;
    Eraser eraser = Eraser::none;
    // Mass of P(p_i) inside the windows, computed from the input state alone.
    double covered_mass = 0.0;
    std::optional<std::string> coverage_warning;

    std::size_t size() const noexcept { return density.size(); }
    double q(std::size_t i) const noexcept { return static_cast<double>(m_min + static_cast<long>(i)) * dq; }
    double q_extent() const noexcept;  // max |q| sampled
    double integral() const;
    // Signed and absolute mass at |q| > limit.
    double mass_outside(double limit) const;
    double abs_mass_outside(double limit) const;
    double min_value() const;
};

// Windows are expected to hold at least this fraction of P(p_i).
inline constexpr double kCoverageThreshold = 0.99;

TransferDistribution transfer_distribution(const TransverseState& state, const MeasurementChannel& ch,
                                           const WindowSet& windows, Eraser eraser);

// Mean spacing of the fringe minima of a momentum density within |p| <= p_range,
// each minimum located to sub-bin precision by parabolic interpolation.
double fringe_period(const SimGrid& grid, const RealSamples& density, double p_range);

// Sign structure of a conditional curve relative to the fringes of P(p_i).
// Every defined p_f outside the window with |p_f| <= p_range is attributed to
// its nearest local extremum of P(p_i).
struct FringeSideExtremes {
    double min_near_maximum = 0.0;  // most negative value attributed to a maximum
    double p_min_near_maximum = 0.0;
    double max_near_minimum = 0.0;  // most positive value attributed to a minimum
    double p_max_near_minimum = 0.0;
    std::size_t maxima = 0;
    std::size_t minima = 0;
};

FringeSideExtremes fringe_side_extremes(const WvpCurve& curve, const RealSamples& initial_density, double p_range);

}  // namespace weakslit
