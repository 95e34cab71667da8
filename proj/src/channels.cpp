#include "weakslit/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <fmt/format.h>

#include "weakslit/errors.hpp"

namespace weakslit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_grid(const TransverseState& state, std::size_t n) {
    if (state.h.size() != n || state.v.size() != n) {
        throw ShapeError(fmt::format("state arrays do not match grid of {} samples", n));
    }
}

TransverseState apply_region(const TransverseState& in, const RegionOperator& op,
                             const PolarizationMap& pol) {
    TransverseState out(in.grid);
    out.sharp_edges = in.sharp_edges;
    for (std::size_t j = 0; j < in.grid.size(); ++j) {
        const double x = in.grid.x(j);
        if (!(x >= op.lo && x < op.hi)) continue;
        // Projector and polarization map act on different factors and commute.
        out.h[j] = pol.hh * in.h[j] + pol.hv * in.v[j];
        out.v[j] = pol.vh * in.h[j] + pol.vv * in.v[j];
    }
    return out;
}

TransverseState apply_ramp(const TransverseState& in, const PhaseRamp& ramp, double sign) {
    TransverseState out(in.grid);
    out.sharp_edges = in.sharp_edges;
    const double q = effective_kick(ramp.kick, in.grid);
    for (std::size_t j = 0; j < in.grid.size(); ++j) {
        const cplx phase = ramp.amplitude * std::polar(1.0, sign * q * in.grid.x(j));
        out.h[j] = phase * in.h[j];
        out.v[j] = phase * in.v[j];
    }
    return out;
}

double distance2(const TransverseState& a, const TransverseState& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.h.size(); ++j) s += std::norm(a.h[j] - b.h[j]) + std::norm(a.v[j] - b.v[j]);
    return s * a.grid.dx();
}

void accumulate(TransverseState& into, const TransverseState& add) {
    for (std::size_t j = 0; j < into.h.size(); ++j) {
        into.h[j] += add.h[j];
        into.v[j] += add.v[j];
    }
}

}  // namespace

MeasurementChannel identity_channel() {
    return {"identity", {{"identity", RegionOperator{-kInf, kInf, PolarizationMap::identity()}, 0}}};
}

MeasurementChannel scully_wwm(const SlitGeometry& geom, const SimGrid& grid) {
    validate(geom);
    (void)grid;
    return {"scully_wwm",
            {{"left", RegionOperator{-kInf, 0.0, PolarizationMap::flip()}, 0},
             {"right", RegionOperator{0.0, kInf, PolarizationMap::identity()}, 0}}};
}

MeasurementChannel classical_kick(const std::vector<Kick>& kicks) {
    if (kicks.empty()) throw ConfigError("classical_kick: at least one kick is required");
    double total = 0.0;
    for (const auto& k : kicks) {
        if (!(k.prob >= 0.0) || !std::isfinite(k.prob)) {
            throw ConfigError(fmt::format("classical_kick: probability {} is negative", k.prob));
        }
        if (!std::isfinite(k.q)) throw ConfigError("classical_kick: kick momentum must be finite");
        total += k.prob;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError(fmt::format("classical_kick: probabilities sum to {}, not 1", total));
    }
    MeasurementChannel ch{"classical_kick", {}};
    int group = 0;
    for (const auto& k : kicks) {
        ch.branches.push_back({fmt::format("kick{:+.6g}", k.q), PhaseRamp{k.q, std::sqrt(k.prob)}, group++});
    }
    return ch;
}

double effective_kick(double q, const SimGrid& grid) { return std::round(q / grid.dp()) * grid.dp(); }

TransverseState apply_branch(const TransverseState& state, const Branch& branch) {
    check_grid(state, state.grid.size());
    if (const auto* region = std::get_if<RegionOperator>(&branch.op)) {
        return apply_region(state, *region, region->polarization);
    }
    return apply_ramp(state, std::get<PhaseRamp>(branch.op), +1.0);
}

TransverseState apply_branch_adjoint(const TransverseState& state, const Branch& branch) {
    check_grid(state, state.grid.size());
    if (const auto* region = std::get_if<RegionOperator>(&branch.op)) {
        return apply_region(state, *region, region->polarization.adjoint());
    }
    const auto& ramp = std::get<PhaseRamp>(branch.op);
    return apply_ramp(state, {ramp.kick, ramp.amplitude}, -1.0);
}

std::vector<BranchState> apply_channel(const TransverseState& state, const MeasurementChannel& ch) {
    std::vector<BranchState> out;
    out.reserve(ch.branches.size());
    for (const auto& b : ch.branches) out.push_back({b.label, b.coherence_group, apply_branch(state, b)});
    return out;
}

double completeness_error(const MeasurementChannel& ch, const SimGrid& grid, std::size_t random_probes) {
    std::vector<TransverseState> probes;
    // Position basis vectors around the origin and near both grid ends.
    for (std::size_t j : {std::size_t{0}, grid.size() / 4, grid.size() / 2 - 1, grid.size() / 2,
                          grid.size() / 2 + 1, grid.size() - 1}) {
        for (int pol = 0; pol < 2; ++pol) {
            TransverseState e(grid);
            (pol == 0 ? e.h : e.v)[j] = 1.0;
            probes.push_back(std::move(e));
        }
    }
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    for (std::size_t r = 0; r < random_probes; ++r) {
        TransverseState s(grid);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            s.h[j] = {gauss(rng), gauss(rng)};
            s.v[j] = {gauss(rng), gauss(rng)};
        }
        probes.push_back(std::move(s));
    }

    double worst = 0.0;
    for (const auto& v : probes) {
        const double ref = v.norm2();
        TransverseState sum(grid);
        std::map<int, TransverseState> groups;
        for (const auto& b : ch.branches) {
            auto kv = apply_branch(v, b);
            accumulate(sum, apply_branch_adjoint(kv, b));
            auto [it, inserted] = groups.try_emplace(b.coherence_group, grid);
            accumulate(it->second, kv);
        }
        worst = std::max(worst, std::sqrt(distance2(sum, v) / ref));
        double group_norm = 0.0;
        for (const auto& [g, s] : groups) group_norm += s.norm2();
        worst = std::max(worst, std::abs(group_norm - ref) / ref);
    }
    return worst;
}

}  // namespace weakslit
