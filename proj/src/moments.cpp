#include "weakslit/moments.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "weakslit/errors.hpp"

namespace weakslit {
namespace {

// Trapezoid sum of f over all samples; f vanishes beyond the sampled range.
template <typename F>
double trapezoid(const TransferDistribution& d, F&& f) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) s += 0.5 * (f(i) + f(i + 1));
    return s * d.dq;
}

struct Moments {
    double mean;
    double variance;
};

Moments momentum_moments(const SimGrid& grid, const RealSamples& density) {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < density.size(); ++k) {
        const double p = grid.p(k);
        m0 += density[k];
        m1 += density[k] * p;
        m2 += density[k] * p * p;
    }
    const double mean = m1 / m0;
    return {mean, m2 / m0 - mean * mean};
}

}  // namespace

void validate(const RegularizationSpec& spec, const TransferDistribution& dist) {
    for (double q : spec.q_max) {
        if (!(q > 0.0) || q > dist.q_extent()) {
            throw ConfigError(fmt::format("q_max {} outside (0, {}]", q, dist.q_extent()));
        }
    }
    for (double k : spec.kappa) {
        if (!(k > 0.0) || k > dist.q_extent()) {
            throw ConfigError(fmt::format("kappa {} outside (0, {}]", k, dist.q_extent()));
        }
    }
}

double sharp_cutoff_variance(const TransferDistribution& dist, double q_max) {
    if (!(q_max > 0.0) || q_max > dist.q_extent()) {
        throw ConfigError(fmt::format("q_max {} outside the sampled range (0, {}]", q_max, dist.q_extent()));
    }
    auto f = [&](std::size_t i) { return dist.density[i] * dist.q(i) * dist.q(i); };
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
        const double a = dist.q(i), b = dist.q(i + 1);
        const double lo = std::max(a, -q_max), hi = std::min(b, q_max);
        if (hi <= lo) continue;
        // Linear interpolant of the integrand on [a, b], integrated over [lo, hi].
        const double fa = f(i), fb = f(i + 1);
        const double flo = fa + (fb - fa) * (lo - a) / (b - a);
        const double fhi = fa + (fb - fa) * (hi - a) / (b - a);
        s += 0.5 * (flo + fhi) * (hi - lo);
    }
    return s;
}

double apodized_variance(const TransferDistribution& dist, double kappa) {
    if (!(kappa > 0.0)) throw ConfigError(fmt::format("kappa must be positive, got {}", kappa));
    return trapezoid(dist, [&](std::size_t i) {
        const double q = dist.q(i);
        return dist.density[i] * q * q * std::exp(-std::abs(q) / kappa);
    });
}

double mean_transfer(const TransferDistribution& dist) {
    return trapezoid(dist, [&](std::size_t i) { return dist.density[i] * dist.q(i); });
}

std::vector<double> default_kappa_ladder(const TransferDistribution& dist, double smallest, std::size_t count) {
    const double largest = dist.q_extent();
    if (!(smallest > 0.0) || smallest >= largest || count < 2) {
        throw ConfigError("kappa ladder needs 0 < smallest < q range and at least two steps");
    }
    std::vector<double> out(count);
    const double ratio = std::pow(largest / smallest, 1.0 / static_cast<double>(count - 1));
    for (std::size_t i = 0; i < count; ++i) out[i] = smallest * std::pow(ratio, static_cast<double>(i));
    out.back() = largest;
    return out;
}

ApodizedSweep apodized_sweep(const TransferDistribution& dist, const std::vector<double>& kappas) {
    if (kappas.empty()) throw ConfigError("apodized sweep needs at least one kappa");
    ApodizedSweep sweep;
    sweep.kappa = kappas;
    std::sort(sweep.kappa.begin(), sweep.kappa.end());
    for (double k : sweep.kappa) sweep.value.push_back(apodized_variance(dist, k));
    sweep.largest_kappa = sweep.kappa.back();
    sweep.value_at_largest = sweep.value.back();
    sweep.extremal_value = *std::max_element(sweep.value.begin(), sweep.value.end(),
                                             [](double a, double b) { return std::abs(a) < std::abs(b); });

    // Trend over the upper half of the ladder.
    std::vector<double> diffs;
    for (std::size_t i = sweep.value.size() / 2; i + 1 < sweep.value.size(); ++i) {
        diffs.push_back(sweep.value[i + 1] - sweep.value[i]);
    }
    const bool down = !diffs.empty() && std::all_of(diffs.begin(), diffs.end(), [](double d) { return d < 0; });
    const bool up = !diffs.empty() && std::all_of(diffs.begin(), diffs.end(), [](double d) { return d > 0; });
    sweep.trend = down ? "decreasing" : up ? "increasing" : count_sign_changes(diffs) > 0 ? "oscillating" : "flat";
    return sweep;
}

int count_sign_changes(const std::vector<double>& values) {
    int changes = 0;
    int last = 0;
    for (double v : values) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

TransferMoments transfer_moments(const TransferDistribution& dist) {
    TransferMoments m;
    m.mass = dist.integral();
    if (m.mass == 0.0) throw NumericError("transfer distribution has zero mass");
    m.mean = mean_transfer(dist) / m.mass;
    const double second = trapezoid(dist, [&](std::size_t i) { return dist.density[i] * dist.q(i) * dist.q(i); });
    m.variance = second / m.mass - m.mean * m.mean;
    return m;
}

MomentChange moment_change(const TransverseState& state, const MeasurementChannel& ch) {
    if (state.sharp_edges) {
        throw NumericError(
            "moment_change: sharp-edged apertures have divergent momentum variance; "
            "use gaussian-smoothed edges");
    }
    const auto before = momentum_moments(state.grid, momentum_distribution(state));
    const auto after = momentum_moments(state.grid, momentum_distribution(state, &ch));
    return {after.mean - before.mean, after.variance - before.variance};
}

}  // namespace weakslit
