#include "weakslit/states.hpp"

#include <cmath>

#include <fmt/format.h>

#include "weakslit/errors.hpp"
#include "weakslit/fourier.hpp"

namespace weakslit {
namespace {

constexpr int kEdgeMarginSamples = 4;

// Aperture transmission of one slit [lo, hi] at x.
double slit_profile(double x, double lo, double hi, const EdgeProfile& edges, double dx) {
    if (const auto* smooth = std::get_if<GaussianEdges>(&edges)) {
        return 0.5 * (std::erf((x - lo) / smooth->scale) - std::erf((x - hi) / smooth->scale));
    }
    // Sharp edge: samples landing on an edge get half weight.
    const double tol = 1e-9 * dx;
    if (std::abs(x - lo) <= tol || std::abs(x - hi) <= tol) return 0.5;
    return (x > lo && x < hi) ? 1.0 : 0.0;
}

void check_fits(const SlitGeometry& geom, const SimGrid& grid) {
    double reach = 0.5 * (geom.separation + geom.width);
    if (const auto* smooth = std::get_if<GaussianEdges>(&geom.edges)) reach += 4.0 * smooth->scale;
    const double margin = kEdgeMarginSamples * grid.dx();
    if (grid.x_min() + margin > -reach || grid.x_max() - margin < reach) {
        throw GeometryError(fmt::format(
            "slits reach |x| = {} but the grid covers [{}, {}] with a {}-sample margin", reach,
            grid.x_min(), grid.x_max(), kEdgeMarginSamples));
    }
}

void normalize(TransverseState& state) {
    const double n2 = state.norm2();
    if (!(n2 > 0.0)) throw NumericError("state has zero norm on this grid");
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : state.h) a *= scale;
    for (auto& a : state.v) a *= scale;
}

TransverseState build_slits(const SlitGeometry& geom, const SimGrid& grid, bool left, bool right) {
    validate(geom);
    check_fits(geom, grid);
    TransverseState state(grid);
    state.sharp_edges = std::holds_alternative<SharpEdges>(geom.edges);
    const double c = 0.5 * geom.separation;
    const double hw = 0.5 * geom.width;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double x = grid.x(j);
        double a = 0.0;
        if (left) a += geom.amplitudes[0] * slit_profile(x, -c - hw, -c + hw, geom.edges, grid.dx());
        if (right) a += geom.amplitudes[1] * slit_profile(x, c - hw, c + hw, geom.edges, grid.dx());
        state.h[j] = a;
    }
    normalize(state);
    return state;
}

}  // namespace

void validate(const SlitGeometry& geom) {
    if (!(geom.width > 0.0)) {
        throw GeometryError(fmt::format("slit width must be positive, got {}", geom.width));
    }
    if (!(geom.separation > geom.width)) {
        throw GeometryError(fmt::format("slit separation {} must exceed slit width {}",
                                        geom.separation, geom.width));
    }
    if (const auto* smooth = std::get_if<GaussianEdges>(&geom.edges); smooth && !(smooth->scale > 0.0)) {
        throw GeometryError("edge smoothing scale must be positive");
    }
    for (double a : geom.amplitudes) {
        if (!(a >= 0.0) || !std::isfinite(a)) throw GeometryError("slit amplitudes must be non-negative");
    }
}

GaussianEdges default_smooth_edges(const SlitGeometry& geom) { return {geom.width / 10.0}; }

double TransverseState::norm2() const { return norm2_x(grid, h) + norm2_x(grid, v); }

RealSamples TransverseState::density() const {
    RealSamples out(grid.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::norm(h[j]) + std::norm(v[j]);
    return out;
}

TransverseState build_double_slit(const SlitGeometry& geom, const SimGrid& grid) {
    return build_slits(geom, grid, true, true);
}

TransverseState build_single_slit(const SlitGeometry& geom, const SimGrid& grid, Slit which) {
    return build_slits(geom, grid, which == Slit::left, which == Slit::right);
}

TransverseState build_momentum_peak(double p0, double width, const SimGrid& grid) {
    if (!(width >= 4.0 * grid.dp())) {
        throw ResolutionError(fmt::format("momentum width {} is below four grid bins ({})", width,
                                          4.0 * grid.dp()));
    }
    ComplexSamples amp(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double u = (grid.p(k) - p0) / width;
        amp[k] = std::exp(-0.5 * u * u);
    }
    TransverseState state(grid);
    state.h = from_momentum(grid, amp);
    normalize(state);
    return state;
}

TransverseState build_gaussian(double x0, double width, const SimGrid& grid) {
    if (!(width >= 2.0 * grid.dx())) {
        throw ResolutionError(fmt::format("position width {} is below two grid bins", width));
    }
    TransverseState state(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double u = (grid.x(j) - x0) / width;
        state.h[j] = std::exp(-0.5 * u * u);
    }
    normalize(state);
    return state;
}

}  // namespace weakslit
