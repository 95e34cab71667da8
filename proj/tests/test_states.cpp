#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "weakslit/errors.hpp"
#include "weakslit/fourier.hpp"
#include "weakslit/states.hpp"
#include "weakslit/weak_values.hpp"

using namespace weakslit;

namespace {

const SimGrid kGrid = make_grid(4096, 32.0);

double peak_p(const RealSamples& dens, const SimGrid& g) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < dens.size(); ++k)
        if (dens[k] > dens[best]) best = k;
    return g.p(best);
}

}  // namespace

TEST_CASE("double slit is normalised, H polarised and even in momentum") {
    for (const EdgeProfile& e : {EdgeProfile{SharpEdges{}}, EdgeProfile{GaussianEdges{0.05}}}) {
        SlitGeometry geom;
        geom.edges = e;
        const auto st = build_double_slit(geom, kGrid);
        CHECK(st.norm2() == doctest::Approx(1.0).epsilon(1e-12));
        for (auto z : st.v) CHECK(z == cplx{});
        const auto dens = momentum_distribution(st);
        double asym = 0.0, top = 0.0;
        for (std::size_t k = 1; k < kGrid.size(); ++k) {
            asym = std::max(asym, std::abs(dens[k] - dens[kGrid.size() - k]));
            top = std::max(top, dens[k]);
        }
        CHECK(asym < 1e-10 * top);
    }
}

TEST_CASE("half-width slits give fringe zeros at odd multiples of pi hbar/s") {
    const auto st = build_double_slit(SlitGeometry{}, make_grid(8192, 64.0));
    const auto& g = st.grid;
    const auto dens = momentum_distribution(st);
    const double centre = dens[g.nearest_p_index(0.0)];
    for (int m : {1, 3, 5}) {
        CHECK(dens[g.nearest_p_index(m * kTwoPi / 2)] < 1e-3 * centre);
        CHECK(dens[g.nearest_p_index(-m * kTwoPi / 2)] < 1e-3 * centre);
    }
    CHECK(dens[g.nearest_p_index(kTwoPi)] > 0.2 * centre);
}

TEST_CASE("sharp edge samples carry half weight") {
    const auto g = make_grid(64, 8.0);  // dx = 1/8, edges at +-0.25 and +-0.75 land on samples
    const auto st = build_double_slit(SlitGeometry{}, g);
    const double inside = std::abs(st.h[g.size() / 2 + 4]);
    CHECK(std::abs(st.h[g.size() / 2 + 2]) == doctest::Approx(0.5 * inside));
    CHECK(std::abs(st.h[g.size() / 2 + 6]) == doctest::Approx(0.5 * inside));
    CHECK(std::abs(st.h[g.size() / 2]) == 0.0);
    CHECK(st.sharp_edges);
}

TEST_CASE("smoothed edges approach sharp edges away from the edges") {
    const auto sharp = build_double_slit(SlitGeometry{}, kGrid);
    double prev = 1e9;
    for (double eps : {0.05, 0.01, 0.002}) {
        SlitGeometry geom;
        geom.edges = GaussianEdges{eps};
        const auto smooth = build_double_slit(geom, kGrid);
        double worst = 0.0;
        for (std::size_t j = 0; j < kGrid.size(); ++j) {
            const double x = std::abs(kGrid.x(j));
            if (std::abs(x - 0.25) < 0.05 || std::abs(x - 0.75) < 0.05) continue;
            worst = std::max(worst, std::abs(smooth.h[j] - sharp.h[j]));
        }
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("invalid geometries") {
    CHECK_THROWS_AS(build_double_slit(SlitGeometry{1.0, 1.0}, kGrid), GeometryError);
    CHECK_THROWS_AS(build_double_slit(SlitGeometry{0.0, 1.0}, kGrid), GeometryError);
    CHECK_THROWS_AS(build_double_slit(SlitGeometry{10.0, 24.0}, kGrid), GeometryError);
    CHECK_THROWS_AS(build_double_slit(SlitGeometry{15.0, 31.0}, kGrid), GeometryError);
}

TEST_CASE("single slit has an envelope without fringes") {
    const auto st = build_single_slit(SlitGeometry{}, kGrid, Slit::left);
    CHECK(st.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 0; j < kGrid.size(); ++j)
        if (kGrid.x(j) > 0.0) CHECK(st.h[j] == cplx{});
    // |sinc(p w / 2)|^2 with w = 1/2 has its first zero at p = 4 pi.
    const auto dens = momentum_distribution(st);
    const double centre = dens[kGrid.nearest_p_index(0.0)];
    CHECK(dens[kGrid.nearest_p_index(kTwoPi / 2)] > 0.8 * centre);
    CHECK(dens[kGrid.nearest_p_index(2 * kTwoPi)] < 1e-3 * centre);
    for (std::size_t k = kGrid.nearest_p_index(0.0); k < kGrid.nearest_p_index(1.9 * kTwoPi); ++k)
        CHECK(dens[k + 1] <= dens[k] * (1 + 1e-12));
}

TEST_CASE("unequal illumination weights the slits") {
    SlitGeometry geom;
    geom.amplitudes = {1.0, 2.0};
    const auto st = build_double_slit(geom, kGrid);
    double left = 0.0, right = 0.0;
    for (std::size_t j = 0; j < kGrid.size(); ++j) (kGrid.x(j) < 0 ? left : right) += std::norm(st.h[j]);
    CHECK(right / left == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("momentum peak") {
    const auto g = make_grid(16384, 512.0);
    const auto st = build_momentum_peak(0.0, 0.05, g);
    CHECK(st.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    const auto dens = momentum_distribution(st);
    // Density exp(-p^2 / w^2) has FWHM 2 sqrt(ln 2) w.
    const double half = dens[g.nearest_p_index(0.0)] / 2;
    std::size_t k = g.nearest_p_index(0.0);
    while (dens[k] > half) ++k;
    const double frac = (dens[k - 1] - half) / (dens[k - 1] - dens[k]);
    const double fwhm = 2 * (g.p(k - 1) + frac * g.dp());
    CHECK(fwhm == doctest::Approx(2 * std::sqrt(std::log(2.0)) * 0.05).epsilon(0.01));
    CHECK(fwhm == doctest::Approx(0.083).epsilon(0.01));

    const auto shifted = build_momentum_peak(1.3, 0.2, g);
    CHECK(std::abs(peak_p(momentum_distribution(shifted), g) - 1.3) <= g.dp());
    CHECK_THROWS_AS(build_momentum_peak(0.0, 3 * g.dp(), g), ResolutionError);
}
