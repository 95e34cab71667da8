#pragma once

#include <string>
#include <vector>

#include "weakslit/weak_values.hpp"

namespace weakslit {

// Cut-offs and apodization scales (momenta, internal units) for variance sweeps.
struct RegularizationSpec {
    std::vector<double> q_max;
    std::vector<double> kappa;
};

// All entries positive and q_max within the sampled q range.
void validate(const RegularizationSpec& spec, const TransferDistribution& dist);

// Integral of P_wv(q) q^2 over [-q_max, q_max]. Trapezoid on the native q grid,
// linearly interpolated at the cut so the result is continuous in q_max.
double sharp_cutoff_variance(const TransferDistribution& dist, double q_max);

// Integral of P_wv(q) q^2 exp(-|q| / kappa) over the sampled range.
double apodized_variance(const TransferDistribution& dist, double kappa);

double mean_transfer(const TransferDistribution& dist);

// The kappa -> infinity limit is not taken: a sweep reports the values, the
// one at the largest kappa and how the tail of the sweep behaves.
struct ApodizedSweep {
    std::vector<double> kappa;
    std::vector<double> value;
    double largest_kappa = 0.0;
    double value_at_largest = 0.0;
    double extremal_value = 0.0;  // value of largest magnitude
    std::string trend;            // "decreasing", "increasing", "oscillating" or "flat"
};

ApodizedSweep apodized_sweep(const TransferDistribution& dist, const std::vector<double>& kappas);

// Geometric kappa ladder from `smallest` up to the largest sampled |q|.
std::vector<double> default_kappa_ladder(const TransferDistribution& dist, double smallest, std::size_t count);

// Number of sign changes of a sequence, ignoring exact zeros.
int count_sign_changes(const std::vector<double>& values);

// Zeroth, first and central second moment of P_wv(q).
struct TransferMoments {
    double mass = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};
TransferMoments transfer_moments(const TransferDistribution& dist);

struct MomentChange {
    double delta_mean = 0.0;
    double delta_variance = 0.0;
};

// Mean and variance of P(p_f) minus those of P(p_i). Sharp-edged inputs have no
// finite momentum variance and are rejected with NumericError.
MomentChange moment_change(const TransverseState& state, const MeasurementChannel& ch);

}  // namespace weakslit
