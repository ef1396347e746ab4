#include "stochcirc/noise.hpp"
#include "stochcirc/rng.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

using namespace stochcirc;
using Catch::Approx;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST_CASE("philox block function reproduces the reference vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("normal variates are addressable and distinct across coordinates") {
    const double a = standard_normal(42, 3, 1, 17);
    CHECK(a == standard_normal(42, 3, 1, 17));
    std::set<double> seen{a, standard_normal(43, 3, 1, 17), standard_normal(42, 4, 1, 17),
                          standard_normal(42, 3, 0, 17), standard_normal(42, 3, 1, 18)};
    CHECK(seen.size() == 5);
}

TEST_CASE("normal variates have unit variance") {
    const int n = 200000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = standard_normal(9, 0, 0, static_cast<std::uint32_t>(k));
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
    CHECK(s2 / n == Approx(1.0).margin(4.0 * std::sqrt(2.0 / n)));
    CHECK(s4 / n == Approx(3.0).margin(0.06));
}

TEST_CASE("uniform variates stay in the open unit interval") {
    double lo = 1.0, hi = 0.0, mean = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        const double u = uniform_open(5, 1, 2, static_cast<std::uint32_t>(k));
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        mean += u / n;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(mean == Approx(0.5).margin(0.005));
}

TEST_CASE("noise paths coarsen by summing increments") {
    const auto fine = NoisePath::generate(3, 0, 2, 8, 0.125);
    const auto coarse = fine.coarsened(2);
    REQUIRE(coarse.steps() == 4);
    CHECK(coarse.dt() == 0.25);
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t c = 0; c < 2; ++c) {
            CHECK(coarse.at_step(k)[c] == Approx(fine.at_step(2 * k)[c] + fine.at_step(2 * k + 1)[c]).epsilon(1e-14));
        }
    }
    CHECK(coarse.value(1, 4) == Approx(fine.value(1, 8)).epsilon(1e-14));
    CHECK_THROWS_AS(fine.coarsened(3), std::invalid_argument);
}

TEST_CASE("noise stream matches the materialized path") {
    const NoiseStream stream(11, 0.01);
    const auto path = NoisePath::generate(11, 5, 3, 20, 0.01);
    std::array<double, 3> dw{};
    for (std::size_t k = 0; k < 20; ++k) {
        stream.increments(5, k, dw);
        for (std::size_t c = 0; c < 3; ++c) CHECK(dw[c] == path.at_step(k)[c]);
    }
}
