#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "weakslit/channels.hpp"
#include "weakslit/errors.hpp"
#include "weakslit/moments.hpp"

using namespace weakslit;

namespace {

const SimGrid kGrid = make_grid(8192, 64.0);
const double kWidth = 15 * kGrid.dp();

SlitGeometry smooth_geometry() {
    SlitGeometry g;
    g.edges = default_smooth_edges(g);
    return g;
}

TransferDistribution tiled(const TransverseState& st, const MeasurementChannel& ch, double width = kWidth) {
    return transfer_distribution(st, ch, full_tiling(st.grid, width), Eraser::none);
}

}  // namespace

TEST_CASE("identity channel variance is the window resolution") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const auto d = tiled(st, identity_channel());
    const double discrete = (kWidth * kWidth - kGrid.dp() * kGrid.dp()) / 12.0;
    CHECK(sharp_cutoff_variance(d, kWidth) == doctest::Approx(discrete).epsilon(1e-9));
    CHECK(sharp_cutoff_variance(d, kWidth) == doctest::Approx(kWidth * kWidth / 12).epsilon(0.01));
    CHECK(apodized_variance(d, 1e3 * kWidth) == doctest::Approx(kWidth * kWidth / 12).epsilon(0.01));
    CHECK(std::abs(mean_transfer(d)) < 1e-12);
    const auto m = transfer_moments(d);
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.variance == doctest::Approx(discrete).epsilon(1e-9));
}

TEST_CASE("kick mixtures add their variance") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const double q0 = effective_kick(2.0, kGrid);
    const auto d = tiled(st, classical_kick({{q0, 0.5}, {-q0, 0.5}}));
    const double expected = q0 * q0 + kWidth * kWidth / 12;
    CHECK(sharp_cutoff_variance(d, q0 + kWidth) == doctest::Approx(expected).epsilon(0.01));
    CHECK(apodized_variance(d, 1e4 * q0) == doctest::Approx(expected).epsilon(0.01));

    const auto single = tiled(st, classical_kick({{q0, 1.0}}));
    CHECK(std::abs(mean_transfer(single) - q0) <= kGrid.dp());
    const auto skew = tiled(st, classical_kick({{q0, 0.7}, {-q0, 0.3}}));
    CHECK(mean_transfer(skew) == doctest::Approx(0.4 * q0).epsilon(1e-7));
}

TEST_CASE("sharp cut-off variance is continuous in q_max") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const auto d = tiled(st, scully_wwm(SlitGeometry{}, kGrid), 0.224 * kTwoPi);
    double prev = sharp_cutoff_variance(d, 0.5);
    const double step = kGrid.dp() / 37;
    double worst = 0.0;
    for (double q = 0.5 + step; q < 6.0; q += step) {
        const double v = sharp_cutoff_variance(d, q);
        worst = std::max(worst, std::abs(v - prev));
        prev = v;
    }
    // Slope bounded by max |P q^2| times the step, times two for both ends.
    double bound = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (std::abs(d.q(i)) < 6.1) bound = std::max(bound, std::abs(d.density[i]) * d.q(i) * d.q(i));
    CHECK(worst <= 2.0 * bound * step * 1.0001);
}

TEST_CASE("sharp and apodized variances agree on compact support") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const double q0 = effective_kick(1.0, kGrid);
    const auto d = tiled(st, classical_kick({{q0, 0.25}, {-2 * q0, 0.75}}));
    CHECK(apodized_variance(d, 1e7) == doctest::Approx(sharp_cutoff_variance(d, d.q_extent())).epsilon(1e-5));
}

TEST_CASE("regularization ranges") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const auto d = tiled(st, identity_channel());
    CHECK_THROWS_AS(sharp_cutoff_variance(d, 0.0), ConfigError);
    CHECK_THROWS_AS(sharp_cutoff_variance(d, 2 * d.q_extent()), ConfigError);
    CHECK_THROWS_AS(validate(RegularizationSpec{{1.0}, {-1.0}}, d), ConfigError);
    CHECK_NOTHROW(validate(RegularizationSpec{{1.0, 2.0}, {3.0}}, d));

    const auto ladder = default_kappa_ladder(d, kWidth, 12);
    REQUIRE(ladder.size() == 12);
    CHECK(ladder.front() == doctest::Approx(kWidth));
    CHECK(ladder.back() == doctest::Approx(d.q_extent()));
    for (std::size_t i = 1; i < ladder.size(); ++i) CHECK(ladder[i] > ladder[i - 1]);
}

TEST_CASE("apodized sweep report") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const auto d = tiled(st, identity_channel());
    const auto s = apodized_sweep(d, {1.0, 10.0, 100.0});
    CHECK(s.largest_kappa == 100.0);
    CHECK(s.value_at_largest == doctest::Approx(apodized_variance(d, 100.0)));
    CHECK(s.trend == "increasing");
}

TEST_CASE("sign changes") {
    CHECK(count_sign_changes({1.0, -1.0, 2.0}) == 2);
    CHECK(count_sign_changes({1.0, 0.0, 2.0}) == 0);
    CHECK(count_sign_changes({1.0, 0.0, -2.0}) == 1);
    CHECK(count_sign_changes({}) == 0);
}

TEST_CASE("moment change across channels") {
    const auto sharp = build_double_slit(SlitGeometry{}, kGrid);
    CHECK_THROWS_AS(moment_change(sharp, identity_channel()), NumericError);

    const auto geom = smooth_geometry();
    const auto st = build_double_slit(geom, kGrid);
    const auto none = moment_change(st, identity_channel());
    CHECK(none.delta_mean == 0.0);
    CHECK(none.delta_variance == 0.0);

    const auto marker = moment_change(st, scully_wwm(geom, kGrid));
    CHECK(std::abs(marker.delta_mean) < 1e-10);
    // Relative to the momentum variance of the state itself.
    RealSamples p = momentum_distribution(st);
    double m2 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) m2 += p[k] * kGrid.p(k) * kGrid.p(k) * kGrid.dp();
    CHECK(std::abs(marker.delta_variance) < 1e-6 * m2);

    const double q0 = effective_kick(2.0, kGrid);
    const auto kicks = moment_change(st, classical_kick({{q0, 0.5}, {-q0, 0.5}}));
    CHECK(std::abs(kicks.delta_mean) < 1e-10);
    CHECK(kicks.delta_variance == doctest::Approx(q0 * q0).epsilon(0.01));
}

TEST_CASE("transfer moments match the moment change for smooth apertures") {
    const auto geom = smooth_geometry();
    const auto st = build_double_slit(geom, kGrid);
    const auto floor = transfer_moments(tiled(st, identity_channel()));
    const double q0 = effective_kick(1.5, kGrid);
    const std::vector<MeasurementChannel> channels{
        scully_wwm(geom, kGrid),
        classical_kick({{q0, 0.5}, {-q0, 0.5}}),
        classical_kick({{q0, 0.7}, {-2 * q0, 0.3}}),
    };
    for (const auto& ch : channels) {
        const auto m = transfer_moments(tiled(st, ch));
        const auto dm = moment_change(st, ch);
        INFO(ch.name);
        const double tol_mean = std::max(0.01 * std::abs(dm.delta_mean), 1e-4);
        const double tol_var = std::max(0.01 * std::abs(dm.delta_variance), 1e-4);
        CHECK(std::abs(m.mean - dm.delta_mean) <= tol_mean);
        CHECK(std::abs(m.variance - floor.variance - dm.delta_variance) <= tol_var);
    }
}
