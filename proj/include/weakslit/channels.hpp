#pragma once

#include <string>
#include <variant>
#include <vector>

#include "weakslit/states.hpp"

namespace weakslit {

// 2x2 map on the (H, V) polarization amplitudes: out_h = hh*h + hv*v, out_v = vh*h + vv*v.
struct PolarizationMap {
    cplx hh{1.0}, hv{0.0}, vh{0.0}, vv{1.0};

    static PolarizationMap identity() { return {}; }
    static PolarizationMap flip() { return {0.0, 1.0, 1.0, 0.0}; }
    PolarizationMap adjoint() const {
        return {std::conj(hh), std::conj(vh), std::conj(hv), std::conj(vv)};
    }
};

// Projector onto the x-interval [lo, hi) followed by a polarization map.
struct RegionOperator {
    double lo;
    double hi;
    PolarizationMap polarization;
};

// amplitude * exp(i kick x): translates momentum by `kick`.
struct PhaseRamp {
    double kick;
    double amplitude;
};

using BranchOperator = std::variant<RegionOperator, PhaseRamp>;

// One Kraus operator of a channel. Branches sharing a coherence group leave no
// record beyond the polarization, so they add coherently once the polarization
// is projected (quantum eraser). Distinct groups never interfere.
struct Branch {
    std::string label;
    BranchOperator op;
    int coherence_group = 0;
};

struct MeasurementChannel {
    std::string name;
    std::vector<Branch> branches;
};

struct Kick {
    double q;
    double prob;
};

MeasurementChannel identity_channel();

// Which-way marker at the slit image plane: the x < 0 half-line has its
// polarization flipped H <-> V, the x >= 0 half-line is left untouched.
MeasurementChannel scully_wwm(const SlitGeometry& geom, const SimGrid& grid);

// Random momentum kicks q_j with probabilities prob_j. Throws ConfigError for
// negative probabilities or probabilities not summing to one.
MeasurementChannel classical_kick(const std::vector<Kick>& kicks);

// Momentum translations are realised on the nearest multiple of dp so that they
// act as exact shifts of the momentum samples.
double effective_kick(double q, const SimGrid& grid);

TransverseState apply_branch(const TransverseState& state, const Branch& branch);
TransverseState apply_branch_adjoint(const TransverseState& state, const Branch& branch);

struct BranchState {
    std::string label;
    int coherence_group;
    TransverseState state;
};

// All branch states K_k psi, unnormalised.
std::vector<BranchState> apply_channel(const TransverseState& state, const MeasurementChannel& ch);

// Largest relative deviation of sum_k K_k^dagger K_k from the identity over a
// probe set of position basis vectors and seeded random states. Also checks
// that every coherence group sums to an isometry.
double completeness_error(const MeasurementChannel& ch, const SimGrid& grid,
                          std::size_t random_probes = 8);

}  // namespace weakslit
