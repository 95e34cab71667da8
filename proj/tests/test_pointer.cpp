#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "weakslit/channels.hpp"
#include "weakslit/errors.hpp"
#include "weakslit/pointer.hpp"

using namespace weakslit;

namespace {

const LabFrame kLab{633e-9, 1.0, 80e-6};
const SimGrid kGrid = make_grid(16384, 64.0);
const SlitGeometry kGeom;

PointerSpec paper_pointer(double ratio = 0.139) {
    PointerSpec p;
    p.displacement = ratio * p.sigma;
    return p;
}

}  // namespace

TEST_CASE("sliver width sets the paper window") {
    const auto w = sliver_window(PointerSpec{}, kLab);
    CHECK(w.width / kTwoPi == doctest::Approx(0.2237).epsilon(1e-3));
    CHECK(w.index == -1);
    CHECK(focal_plane_position(w.center(), kLab) == doctest::Approx(-1.77e-3));
}

TEST_CASE("intensity map moments match direct quadrature over y") {
    const auto st = build_double_slit(kGeom, kGrid);
    const auto map = run_tagged(st, scully_wwm(kGeom, kGrid), paper_pointer(0.5), kLab);
    const double sigma = map.sigma;
    for (std::size_t k : {kGrid.nearest_p_index(-1.4), kGrid.nearest_p_index(0.7), kGrid.nearest_p_index(3.0)}) {
        double m0 = 0.0, m1 = 0.0;
        const double dy = sigma / 400;
        for (double y = -10 * sigma; y <= 10 * sigma; y += dy) {
            const double i = map.intensity(k, y);
            m0 += i * dy;
            m1 += y * i * dy;
        }
        CHECK(m0 == doctest::Approx(map.marginal(k)).epsilon(1e-9));
        CHECK(m1 == doctest::Approx(map.first_moment(k)).epsilon(1e-9).scale(map.marginal(k) * sigma));
    }
}

TEST_CASE("untagged pointer leaves the momentum distribution and centroid alone") {
    const auto st = build_double_slit(kGeom, kGrid);
    const auto ch = scully_wwm(kGeom, kGrid);
    auto spec = paper_pointer();
    spec.displacement = 0.0;
    const auto map = run_tagged(st, ch, spec, kLab);
    const auto p = subset_distribution(st, ch, Eraser::none);
    double worst = 0.0, moment = 0.0;
    for (std::size_t k = 0; k < kGrid.size(); ++k) {
        worst = std::max(worst, std::abs(map.marginal(k) - p[k]));
        moment = std::max(moment, std::abs(map.first_moment(k)));
    }
    CHECK(worst < 1e-12);
    CHECK(moment == 0.0);
    CHECK_THROWS_AS(estimate_wvp(map), ConfigError);
}

TEST_CASE("marginal disturbance is second order in D over sigma") {
    const auto st = build_double_slit(kGeom, kGrid);
    const auto ch = scully_wwm(kGeom, kGrid);
    const auto p = subset_distribution(st, ch, Eraser::none);
    auto disturbance = [&](double r) {
        const auto map = run_tagged(st, ch, paper_pointer(r), kLab);
        double worst = 0.0;
        for (std::size_t k = 0; k < kGrid.size(); ++k) worst = std::max(worst, std::abs(map.marginal(k) - p[k]));
        return worst;
    };
    const double a = disturbance(0.01), b = disturbance(0.001);
    CHECK(std::log(a / b) / std::log(10.0) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(b < 1e-6);
}

TEST_CASE("identity channel reads the window indicator") {
    const auto st = build_double_slit(kGeom, kGrid);
    const auto est = estimate_wvp(run_tagged(st, identity_channel(), paper_pointer(0.3), kLab));
    const auto win = sliver_window(paper_pointer(), kLab);
    for (std::size_t k = 0; k < kGrid.size(); ++k) {
        if (est.defined[k] && win.contains(kGrid.p(k))) CHECK(est.values[k] == doctest::Approx(1.0).epsilon(1e-12));
        if (est.defined[k] && !win.contains(kGrid.p(k))) CHECK(std::abs(est.values[k]) < 1e-12);
    }
    const auto weak = estimate_wvp(run_tagged(st, identity_channel(), paper_pointer(0.01), kLab));
    for (std::size_t k = 0; k < kGrid.size(); ++k)
        if (weak.defined[k]) CHECK(std::abs(weak.values[k] - (win.contains(kGrid.p(k)) ? 1.0 : 0.0)) < 1e-6);
}

TEST_CASE("full-space window reads one for any strength") {
    const auto st = build_double_slit(kGeom, kGrid);
    PointerSpec spec = paper_pointer(1.0);
    spec.window_index = 0;
    spec.sliver_width = focal_plane_position(2.0 * kGrid.size() * kGrid.dp(), kLab);
    for (double r : {0.01, 0.5, 1.0}) {
        spec.displacement = r * spec.sigma;
        const auto est = estimate_wvp(run_tagged(st, identity_channel(), spec, kLab));
        for (std::size_t k = 0; k < kGrid.size(); ++k)
            if (est.defined[k]) CHECK(est.values[k] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("which-way marker gives negative centroid shifts") {
    const auto st = build_double_slit(kGeom, kGrid);
    const auto ch = scully_wwm(kGeom, kGrid);
    const auto est = estimate_wvp(run_tagged(st, ch, paper_pointer(0.01), kLab));
    const auto exact = conditional_wvp(st, ch, sliver_window(paper_pointer(), kLab), Eraser::none);
    std::size_t negative = 0;
    for (std::size_t k = 0; k < kGrid.size(); ++k) {
        if (!est.defined[k] || !exact.defined[k] || exact.values[k] > -0.05) continue;
        CHECK(est.values[k] < 0.0);
        ++negative;
    }
    CHECK(negative > 0);
}

TEST_CASE("classical kicks give non-negative estimates") {
    const auto st = build_double_slit(kGeom, kGrid);
    const auto ch = classical_kick({{1.0, 0.5}, {-2.5, 0.5}});
    const auto est = estimate_wvp(run_tagged(st, ch, paper_pointer(0.01), kLab));
    for (std::size_t k = 0; k < kGrid.size(); ++k)
        if (est.defined[k]) CHECK(est.values[k] >= -1e-6);
}

TEST_CASE("convergence towards the weak value") {
    const auto st = build_double_slit(kGeom, kGrid);
    const auto ch = scully_wwm(kGeom, kGrid);
    const auto table = convergence_sweep(st, ch, paper_pointer(), kLab, {0.3, 0.139, 0.05, 0.01, 0.001});
    REQUIRE(table.rows.size() == 5);
    CHECK(table.monotonic);
    CHECK(table.small_ratio_slope == doctest::Approx(2.0).epsilon(0.15));
    CHECK(table.rows[4].max_abs_deviation < 1e-5);
    CHECK(table.rows[1].max_abs_deviation > 0.05);
    CHECK(table.rows[3].max_abs_deviation < table.rows[0].max_abs_deviation);

    CHECK_THROWS_AS(convergence_sweep(st, ch, paper_pointer(), kLab, {0.5, 1.0}), ConfigError);
    CHECK_THROWS_AS(convergence_sweep(st, ch, paper_pointer(), kLab, {0.0}), ConfigError);
}

TEST_CASE("pointer spec validation") {
    PointerSpec bad;
    bad.sigma = 0.0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    PointerSpec far;
    far.window_index = 100000;
    const auto st = build_double_slit(kGeom, kGrid);
    CHECK_THROWS_AS(run_tagged(st, identity_channel(), far, kLab), ConfigError);
}
