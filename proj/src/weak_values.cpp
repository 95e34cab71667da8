#include "weakslit/weak_values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "weakslit/errors.hpp"
#include "weakslit/fourier.hpp"
#include "weakslit/parallel.hpp"

namespace weakslit {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
constexpr std::size_t kWindowBatch = 64;

bool all_zero(const ComplexSamples& a) {
    return std::all_of(a.begin(), a.end(), [](const cplx& z) { return z == cplx{}; });
}

ComplexSamples momentum_of(const SimGrid& grid, const ComplexSamples& psi) {
    if (all_zero(psi)) return ComplexSamples(grid.size());
    return to_momentum(grid, psi);
}

void check_same_grid(const TransverseState& state) {
    if (state.h.size() != state.grid.size() || state.v.size() != state.grid.size()) {
        throw ShapeError("state arrays do not match their grid");
    }
}

// Pi_win applied to a state given by its momentum amplitudes.
TransverseState project_momentum(const SimGrid& grid, const ComplexSamples& h_p,
                                 const ComplexSamples& v_p, const MomentumWindow& win) {
    TransverseState out(grid);
    ComplexSamples hw(grid.size()), vw(grid.size());
    bool any_v = false;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!win.contains(grid.p(k))) continue;
        hw[k] = h_p[k];
        vw[k] = v_p[k];
        any_v = any_v || v_p[k] != cplx{};
    }
    out.h = from_momentum(grid, hw);
    if (any_v) out.v = from_momentum(grid, vw);
    return out;
}

RealSamples joint_from(const std::vector<ComplexSamples>& chi, const std::vector<ComplexSamples>& psi) {
    RealSamples j(psi.front().size(), 0.0);
    for (std::size_t c = 0; c < psi.size(); ++c) {
        for (std::size_t k = 0; k < j.size(); ++k) j[k] += (chi[c][k] * std::conj(psi[c][k])).real();
    }
    return j;
}

RealSamples density_from(const std::vector<ComplexSamples>& comps) {
    RealSamples d(comps.front().size(), 0.0);
    for (const auto& a : comps) {
        for (std::size_t k = 0; k < d.size(); ++k) d[k] += std::norm(a[k]);
    }
    return d;
}

}  // namespace

std::string to_string(Eraser e) {
    switch (e) {
        case Eraser::none: return "none";
        case Eraser::plus45: return "plus45";
        case Eraser::minus45: return "minus45";
    }
    return "none";
}

Eraser eraser_from_string(const std::string& s) {
    if (s == "none") return Eraser::none;
    if (s == "plus45") return Eraser::plus45;
    if (s == "minus45") return Eraser::minus45;
    throw ConfigError(fmt::format("unknown eraser setting '{}' (expected none, plus45, minus45)", s));
}

std::vector<MomentumWindow> WindowSet::windows() const {
    std::vector<MomentumWindow> out;
    for (int n = n_min; n <= n_max; ++n) out.push_back({n, width});
    return out;
}

WindowSet full_tiling(const SimGrid& grid, double width) {
    const int n = static_cast<int>(std::ceil((std::max(-grid.p_min(), grid.p_max()) + 0.5 * width) / width));
    return {-n, n, width};
}

void validate(const MomentumWindow& win, const SimGrid& grid) {
    if (!(win.width >= 2.0 * grid.dp())) {
        throw ResolutionError(fmt::format("window width {} is narrower than two momentum bins ({})",
                                          win.width, 2.0 * grid.dp()));
    }
}

TransverseState window_project(const TransverseState& state, const MomentumWindow& win) {
    check_same_grid(state);
    validate(win, state.grid);
    auto out = project_momentum(state.grid, momentum_of(state.grid, state.h),
                                momentum_of(state.grid, state.v), win);
    out.sharp_edges = state.sharp_edges;
    return out;
}

std::vector<ComplexSamples> propagate(const TransverseState& state, const MeasurementChannel& ch,
                                      Eraser eraser) {
    check_same_grid(state);
    if (ch.branches.empty()) throw ConfigError("channel has no branches");
    std::map<int, TransverseState> groups;
    for (const auto& b : ch.branches) {
        auto out = apply_branch(state, b);
        auto [it, inserted] = groups.try_emplace(b.coherence_group, state.grid);
        for (std::size_t j = 0; j < out.h.size(); ++j) {
            it->second.h[j] += out.h[j];
            it->second.v[j] += out.v[j];
        }
    }
    std::vector<ComplexSamples> comps;
    for (auto& [g, s] : groups) {
        auto h = momentum_of(state.grid, s.h);
        auto v = momentum_of(state.grid, s.v);
        if (eraser == Eraser::none) {
            comps.push_back(std::move(h));
            comps.push_back(std::move(v));
            continue;
        }
        const double sign = eraser == Eraser::plus45 ? 1.0 : -1.0;
        ComplexSamples e(h.size());
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = kInvSqrt2 * (h[k] + sign * v[k]);
        comps.push_back(std::move(e));
    }
    return comps;
}

RealSamples momentum_distribution(const TransverseState& state, const MeasurementChannel* ch) {
    check_same_grid(state);
    RealSamples d = ch ? density_from(propagate(state, *ch, Eraser::none))
                       : density_from({momentum_of(state.grid, state.h), momentum_of(state.grid, state.v)});
    double mass = 0.0;
    for (double v : d) mass += v;
    mass *= state.grid.dp();
    if (!(mass > 0.0)) throw NumericError("momentum distribution has zero mass");
    for (double& v : d) v /= mass;
    return d;
}

RealSamples subset_distribution(const TransverseState& state, const MeasurementChannel& ch, Eraser eraser) {
    return density_from(propagate(state, ch, eraser));
}

RealSamples joint_wvp(const TransverseState& state, const MeasurementChannel& ch, const MomentumWindow& win,
                      Eraser eraser) {
    const auto chi = window_project(state, win);
    return joint_from(propagate(chi, ch, eraser), propagate(state, ch, eraser));
}

WvpCurve conditional_wvp(const TransverseState& state, const MeasurementChannel& ch, const MomentumWindow& win,
                         Eraser eraser) {
    const auto chi = window_project(state, win);
    const auto psi_out = propagate(state, ch, eraser);
    WvpCurve curve{state.grid, win, eraser, {}, joint_from(propagate(chi, ch, eraser), psi_out),
                   density_from(psi_out), {}};
    const double cut = kUndefinedThreshold * *std::max_element(curve.density.begin(), curve.density.end());
    const std::size_t n = curve.joint.size();
    curve.values.assign(n, std::numeric_limits<double>::quiet_NaN());
    curve.defined.assign(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        if (curve.density[k] > cut && curve.density[k] > 0.0) {
            curve.values[k] = curve.joint[k] / curve.density[k];
            curve.defined[k] = true;
        }
    }
    return curve;
}

double TransferDistribution::q_extent() const noexcept {
    return std::max(std::abs(q(0)), std::abs(q(size() - 1)));
}

double TransferDistribution::integral() const {
    double s = 0.0;
    for (double v : density) s += v;
    return s * dq;
}

double TransferDistribution::mass_outside(double limit) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (std::abs(q(i)) > limit) s += density[i];
    }
    return s * dq;
}

double TransferDistribution::abs_mass_outside(double limit) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (std::abs(q(i)) > limit) s += std::abs(density[i]);
    }
    return s * dq;
}

double TransferDistribution::min_value() const { return *std::min_element(density.begin(), density.end()); }

TransferDistribution transfer_distribution(const TransverseState& state, const MeasurementChannel& ch,
                                           const WindowSet& windows, Eraser eraser) {
    check_same_grid(state);
    if (windows.n_max < windows.n_min) throw ConfigError("window range is empty");
    const auto& grid = state.grid;
    const auto wins = windows.windows();
    validate(wins.front(), grid);

    const auto h_p = momentum_of(grid, state.h);
    const auto v_p = momentum_of(grid, state.v);
    const auto psi_out = propagate(state, ch, eraser);

    // Window centres p_i,n snap to the nearest momentum sample.
    std::vector<long> centre(wins.size());
    for (std::size_t i = 0; i < wins.size(); ++i) {
        centre[i] = std::lround(wins[i].center() / grid.dp());
    }
    const long half = static_cast<long>(grid.size() / 2);
    const long m_min = -half - *std::max_element(centre.begin(), centre.end());
    const long m_max = half - 1 - *std::min_element(centre.begin(), centre.end());

    TransferDistribution out;
    out.dq = grid.dp();
    out.m_min = m_min;
    out.density.assign(static_cast<std::size_t>(m_max - m_min + 1), 0.0);
    out.windows = wins;
    out.eraser = eraser;

    double prior_in = 0.0, prior_all = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = std::norm(h_p[k]) + std::norm(v_p[k]);
        prior_all += w;
        if (grid.p(k) >= wins.front().lo() && grid.p(k) < wins.back().hi()) prior_in += w;
    }
    out.covered_mass = prior_in / prior_all;
    if (out.covered_mass < kCoverageThreshold) {
        out.coverage_warning = fmt::format(
            "windows n = {}..{} hold only {:.6f} of the initial momentum mass (expected >= {})",
            windows.n_min, windows.n_max, out.covered_mass, kCoverageThreshold);
    }

    // Windows are evaluated in parallel batches and summed in window order.
    std::vector<RealSamples> batch(kWindowBatch);
    for (std::size_t start = 0; start < wins.size(); start += kWindowBatch) {
        const std::size_t count = std::min(kWindowBatch, wins.size() - start);
        parallel_for(count, [&](std::size_t b) {
            const auto chi = project_momentum(grid, h_p, v_p, wins[start + b]);
            batch[b] = joint_from(propagate(chi, ch, eraser), psi_out);
        });
        for (std::size_t b = 0; b < count; ++b) {
            const long c = centre[start + b];
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const long m = grid.offset(k) - c;
                out.density[static_cast<std::size_t>(m - m_min)] += batch[b][k];
            }
        }
    }
    return out;
}

}  // namespace weakslit

namespace weakslit {
namespace {

struct Extremum {
    double p;
    bool maximum;
};

std::vector<Extremum> local_extrema(const SimGrid& grid, const RealSamples& d, double p_range) {
    std::vector<Extremum> out;
    for (std::size_t k = 1; k + 1 < d.size(); ++k) {
        if (std::abs(grid.p(k)) > p_range) continue;
        if (d[k] > d[k - 1] && d[k] >= d[k + 1]) out.push_back({grid.p(k), true});
        if (d[k] < d[k - 1] && d[k] <= d[k + 1]) out.push_back({grid.p(k), false});
    }
    return out;
}

}  // namespace

double fringe_period(const SimGrid& grid, const RealSamples& density, double p_range) {
    if (density.size() != grid.size()) throw ShapeError("fringe_period: density does not match grid");
    std::vector<double> minima;
    for (std::size_t k = 1; k + 1 < density.size(); ++k) {
        if (std::abs(grid.p(k)) > p_range) continue;
        const double a = density[k - 1], b = density[k], c = density[k + 1];
        if (!(b < a && b <= c)) continue;
        // Vertex of the parabola through the three samples.
        const double curv = a - 2.0 * b + c;
        const double shift = curv > 0.0 ? 0.5 * (a - c) / curv : 0.0;
        minima.push_back(grid.p(k) + shift * grid.dp());
    }
    if (minima.size() < 2) throw NumericError("fringe_period: fewer than two fringe minima in range");
    return (minima.back() - minima.front()) / static_cast<double>(minima.size() - 1);
}

FringeSideExtremes fringe_side_extremes(const WvpCurve& curve, const RealSamples& initial_density, double p_range) {
    const auto& grid = curve.grid;
    const auto ext = local_extrema(grid, initial_density, p_range);
    FringeSideExtremes out;
    for (const auto& e : ext) (e.maximum ? out.maxima : out.minima)++;
    if (out.maxima == 0 || out.minima == 0) return out;
    for (std::size_t k = 0; k < curve.values.size(); ++k) {
        const double p = grid.p(k);
        if (!curve.defined[k] || std::abs(p) > p_range || curve.window.contains(p)) continue;
        const auto nearest = std::min_element(ext.begin(), ext.end(), [p](const Extremum& a, const Extremum& b) {
            return std::abs(a.p - p) < std::abs(b.p - p);
        });
        const double v = curve.values[k];
        if (nearest->maximum && v < out.min_near_maximum) {
            out.min_near_maximum = v;
            out.p_min_near_maximum = p;
        }
        if (!nearest->maximum && v > out.max_near_minimum) {
            out.max_near_minimum = v;
            out.p_max_near_minimum = p;
        }
    }
    return out;
}

}  // namespace weakslit
