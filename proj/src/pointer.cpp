#include "weakslit/pointer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "weakslit/errors.hpp"

namespace weakslit {

void validate(const PointerSpec& spec) {
    if (!(spec.sigma > 0.0)) throw ConfigError(fmt::format("pointer.sigma must be positive, got {}", spec.sigma));
    if (!(spec.displacement >= 0.0)) {
        throw ConfigError(fmt::format("pointer.displacement must be non-negative, got {}", spec.displacement));
    }
    if (!(spec.sliver_width > 0.0)) {
        throw ConfigError(fmt::format("pointer.sliver_width must be positive, got {}", spec.sliver_width));
    }
}

MomentumWindow sliver_window(const PointerSpec& spec, const LabFrame& lab) {
    return {spec.window_index, momentum_at_focal_position(spec.sliver_width, lab)};
}

double IntensityMap::overlap() const {
    const double r = displacement / sigma;
    return std::exp(-0.5 * r * r);
}

double IntensityMap::intensity(std::size_t k, double y) const {
    // |G(y)|^2 = sqrt(2/pi)/sigma exp(-2 y^2 / sigma^2)
    const double norm = std::sqrt(2.0 / std::numbers::pi) / sigma;
    const double g0 = std::exp(-y * y / (sigma * sigma));
    const double gd = std::exp(-(y - displacement) * (y - displacement) / (sigma * sigma));
    return norm * (untagged[k] * g0 * g0 + tagged[k] * gd * gd + 2.0 * cross[k] * g0 * gd);
}

double IntensityMap::marginal(std::size_t k) const {
    return untagged[k] + tagged[k] + 2.0 * overlap() * cross[k];
}

double IntensityMap::first_moment(std::size_t k) const {
    // The G_0 G_D cross density is centred at D/2.
    return displacement * (tagged[k] + overlap() * cross[k]);
}

IntensityMap run_tagged(const TransverseState& state, const MeasurementChannel& ch, const PointerSpec& pointer,
                        const LabFrame& lab, Eraser eraser) {
    validate(pointer);
    validate(lab);
    const auto win = sliver_window(pointer, lab);
    if (win.hi() <= state.grid.p_min() || win.lo() > state.grid.p_max()) {
        throw ConfigError(fmt::format("pointer window [{}, {}) does not reach the momentum grid [{}, {}]", win.lo(),
                                      win.hi(), state.grid.p_min(), state.grid.p_max()));
    }
    const auto all = propagate(state, ch, eraser);
    const auto tag = propagate(window_project(state, win), ch, eraser);

    IntensityMap map{state.grid, win, pointer.sigma, pointer.displacement, {}, {}, {}};
    const std::size_t n = state.grid.size();
    map.untagged.assign(n, 0.0);
    map.tagged.assign(n, 0.0);
    map.cross.assign(n, 0.0);
    for (std::size_t c = 0; c < all.size(); ++c) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx t = tag[c][k];
            const cplx u = all[c][k] - t;
            map.untagged[k] += std::norm(u);
            map.tagged[k] += std::norm(t);
            map.cross[k] += (u * std::conj(t)).real();
        }
    }
    return map;
}

WvpCurve estimate_wvp(const IntensityMap& map) {
    if (!(map.displacement > 0.0)) throw ConfigError("estimate_wvp needs a non-zero tag displacement D");
    const std::size_t n = map.grid.size();
    WvpCurve curve{map.grid, map.window, Eraser::none, {}, {}, {}, {}};
    curve.density.resize(n);
    curve.joint.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        curve.density[k] = map.marginal(k);
        curve.joint[k] = map.first_moment(k) / map.displacement;
    }
    const double peak = *std::max_element(curve.density.begin(), curve.density.end());
    if (!(peak > 0.0)) throw NumericError("estimate_wvp: intensity map is zero in every p_f column");
    const double cut = kUndefinedThreshold * peak;
    curve.values.assign(n, std::numeric_limits<double>::quiet_NaN());
    curve.defined.assign(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        if (curve.density[k] > cut) {
            curve.values[k] = curve.joint[k] / curve.density[k];
            curve.defined[k] = true;
        }
    }
    return curve;
}

ConvergenceTable convergence_sweep(const TransverseState& state, const MeasurementChannel& ch,
                                   const PointerSpec& base, const LabFrame& lab, const std::vector<double>& ratios) {
    if (ratios.empty()) throw ConfigError("convergence_sweep needs at least one ratio");
    for (double r : ratios) {
        if (!(r > 0.0 && r < 1.0)) throw ConfigError(fmt::format("D/sigma ratio {} outside (0, 1)", r));
    }
    const auto analytic = conditional_wvp(state, ch, sliver_window(base, lab), Eraser::none);

    ConvergenceTable table;
    for (double r : ratios) {
        PointerSpec spec = base;
        spec.displacement = r * base.sigma;
        const auto est = estimate_wvp(run_tagged(state, ch, spec, lab));
        ConvergenceRow row{r, 0.0, 0.0, 0.0};
        std::size_t count = 0;
        for (std::size_t k = 0; k < est.values.size(); ++k) {
            if (!est.defined[k] || !analytic.defined[k]) continue;
            const double d = std::abs(est.values[k] - analytic.values[k]);
            if (d > row.max_abs_deviation) {
                row.max_abs_deviation = d;
                row.p_at_max = state.grid.p(k);
            }
            row.rms_deviation += d * d;
            ++count;
        }
        if (count > 0) row.rms_deviation = std::sqrt(row.rms_deviation / static_cast<double>(count));
        table.rows.push_back(row);
    }

    auto by_ratio = table.rows;
    std::sort(by_ratio.begin(), by_ratio.end(), [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
    table.monotonic = true;
    for (std::size_t i = 0; i + 1 < by_ratio.size(); ++i) {
        if (!(by_ratio[i].max_abs_deviation < by_ratio[i + 1].max_abs_deviation)) table.monotonic = false;
    }
    if (by_ratio.size() >= 2) {
        const auto& a = by_ratio[0];
        const auto& b = by_ratio[1];
        table.small_ratio_slope = std::log(b.max_abs_deviation / a.max_abs_deviation) / std::log(b.ratio / a.ratio);
    }
    return table;
}

}  // namespace weakslit
