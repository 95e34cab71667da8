#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "weakslit/channels.hpp"
#include "weakslit/errors.hpp"
#include "weakslit/fourier.hpp"
#include "weakslit/weak_values.hpp"

using namespace weakslit;

namespace {

const SimGrid kGrid = make_grid(2048, 32.0);

double branch_norm_sum(const std::vector<BranchState>& out) {
    double s = 0.0;
    for (const auto& b : out) s += b.state.norm2();
    return s;
}

// Random state confined to the two slit apertures, both polarizations.
TransverseState random_slit_state(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    TransverseState st(kGrid);
    for (std::size_t j = 0; j < kGrid.size(); ++j) {
        if (std::abs(std::abs(kGrid.x(j)) - 0.5) < 0.25) {
            st.h[j] = {g(rng), g(rng)};
            st.v[j] = {g(rng), g(rng)};
        }
    }
    const double n = std::sqrt(st.norm2());
    for (auto& z : st.h) z /= n;
    for (auto& z : st.v) z /= n;
    return st;
}

}  // namespace

TEST_CASE("channels are complete") {
    const SlitGeometry geom;
    CHECK(completeness_error(identity_channel(), kGrid) < 1e-10);
    CHECK(completeness_error(scully_wwm(geom, kGrid), kGrid) < 1e-10);
    CHECK(completeness_error(classical_kick({{2.0, 0.5}, {-2.0, 0.5}}), kGrid) < 1e-10);
    CHECK(completeness_error(classical_kick({{0.3, 0.2}, {1.1, 0.3}, {-4.0, 0.5}}), kGrid) < 1e-10);
}

TEST_CASE("invalid kick distributions") {
    CHECK_THROWS_AS(classical_kick({{1.0, -0.1}, {2.0, 1.1}}), ConfigError);
    CHECK_THROWS_AS(classical_kick({{1.0, 0.5}, {2.0, 0.4}}), ConfigError);
    CHECK_THROWS_AS(classical_kick({}), ConfigError);
}

TEST_CASE("identity channel returns the input") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const auto out = apply_channel(st, identity_channel());
    REQUIRE(out.size() == 1);
    CHECK(out[0].state.h == st.h);
    CHECK(out[0].state.v == st.v);
}

TEST_CASE("which-way marker splits a symmetric double slit evenly") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const auto out = apply_channel(st, scully_wwm(SlitGeometry{}, kGrid));
    REQUIRE(out.size() == 2);
    CHECK(out[0].state.norm2() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(out[1].state.norm2() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(branch_norm_sum(out) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("which-way marker leaves the spatial density unchanged") {
    const auto ch = scully_wwm(SlitGeometry{}, kGrid);
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const auto st = random_slit_state(seed);
        const auto before = st.density();
        RealSamples after(kGrid.size(), 0.0);
        const auto out = apply_channel(st, ch);
        for (const auto& b : out) {
            const auto d = b.state.density();
            for (std::size_t j = 0; j < d.size(); ++j) after[j] += d[j];
        }
        double worst = 0.0;
        for (std::size_t j = 0; j < before.size(); ++j) worst = std::max(worst, std::abs(after[j] - before[j]));
        CHECK(worst < 1e-12);
        CHECK(branch_norm_sum(out) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("single slit through the marker is a polarization relabel") {
    const auto st = build_single_slit(SlitGeometry{}, kGrid, Slit::left);
    const auto out = apply_channel(st, scully_wwm(SlitGeometry{}, kGrid));
    double worst = 0.0;
    for (std::size_t j = 0; j < kGrid.size(); ++j) {
        double d = 0.0;
        for (const auto& b : out) d += std::norm(b.state.h[j]) + std::norm(b.state.v[j]);
        worst = std::max(worst, std::abs(d - std::norm(st.h[j])));
    }
    CHECK(worst < 1e-12);
    CHECK(out[0].state.v == st.h);
}

TEST_CASE("marker removes the fringes") {
    const auto g = make_grid(8192, 64.0);
    const auto st = build_double_slit(SlitGeometry{}, g);
    const auto ch = scully_wwm(SlitGeometry{}, g);
    const auto after = momentum_distribution(st, &ch);
    const auto single = momentum_distribution(build_single_slit(SlitGeometry{}, g, Slit::left));
    double worst = 0.0, top = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        worst = std::max(worst, std::abs(after[k] - single[k]));
        top = std::max(top, single[k]);
    }
    // Visibility of any residual fringe relative to the single-slit envelope.
    CHECK(worst / top < 1e-10);
}

TEST_CASE("kicks translate the momentum density") {
    const auto st = build_double_slit(SlitGeometry{}, kGrid);
    const auto base = momentum_distribution(st);
    const double q = effective_kick(2.0, kGrid);
    const long shift = std::lround(q / kGrid.dp());
    CHECK(std::abs(q - 2.0) <= 0.5 * kGrid.dp());

    const auto one = classical_kick({{2.0, 1.0}});
    const auto shifted = momentum_distribution(st, &one);
    const auto two = classical_kick({{2.0, 0.5}, {-2.0, 0.5}});
    const auto mixed = momentum_distribution(st, &two);
    double w1 = 0.0, w2 = 0.0;
    for (long k = 200; k < static_cast<long>(kGrid.size()) - 200; ++k) {
        w1 = std::max(w1, std::abs(shifted[k] - base[k - shift]));
        w2 = std::max(w2, std::abs(mixed[k] - 0.5 * (base[k - shift] + base[k + shift])));
    }
    CHECK(w1 < 1e-12);
    CHECK(w2 < 1e-12);

    const auto out = apply_channel(st, two);
    REQUIRE(out.size() == 2);
    CHECK(out[0].state.norm2() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out[0].coherence_group != out[1].coherence_group);
}

TEST_CASE("branch adjoint") {
    const auto st = random_slit_state(9);
    for (const auto& b : scully_wwm(SlitGeometry{}, kGrid).branches) {
        // <K a, K a> == <a, K^dagger K a>
        const auto ka = apply_branch(st, b);
        const auto kk = apply_branch_adjoint(ka, b);
        cplx lhs = 0.0, rhs = 0.0;
        for (std::size_t j = 0; j < kGrid.size(); ++j) {
            lhs += std::conj(ka.h[j]) * ka.h[j] + std::conj(ka.v[j]) * ka.v[j];
            rhs += std::conj(st.h[j]) * kk.h[j] + std::conj(st.v[j]) * kk.v[j];
        }
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
    }
}
