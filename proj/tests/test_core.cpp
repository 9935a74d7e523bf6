#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rabi/core.hpp"

using namespace rabi;

TEST_CASE("derived scales at omega=0.1, Omega=1") {
    const DerivedParams d = derive({0.1, 1.0, 0.05});
    // direct arithmetic from the definitions
    const double gc0 = std::sqrt(0.1) / 2.0;
    const double gc = std::sqrt(0.01 + std::sqrt(1e-4 + gc0 * gc0 * gc0 * gc0));
    CHECK(d.gc0 == doctest::Approx(gc0).epsilon(1e-14));
    CHECK(d.gc == doctest::Approx(gc).epsilon(1e-14));
    CHECK(d.gc0 == doctest::Approx(0.1581139).epsilon(1e-6));
    CHECK(d.gc == doctest::Approx(0.1921609).epsilon(1e-6));
}

TEST_CASE("gprime and constant energy") {
    const DerivedParams d = derive({1.0, 1.0, 0.5});
    CHECK(d.gprime == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(d.e0 == doctest::Approx(-0.75).epsilon(1e-14));
}

TEST_CASE("slow-oscillator limit g_c -> g_c0") {
    const DerivedParams d = derive({1e-4, 1.0, 0.0});
    CHECK(d.gc / d.gc0 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("g_c monotone in omega and Omega") {
    double prev_row = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double omega = 0.01 + 0.05 * i;
        double prev = 0.0;
        for (int j = 0; j < 20; ++j) {
            const double big_omega = 0.1 + 0.2 * j;
            const double gc = derive({omega, big_omega, 0.0}).gc;
            CHECK(gc > prev);  // increasing in Omega at fixed omega
            prev = gc;
        }
        const double gc_col = derive({omega, 1.0, 0.0}).gc;
        CHECK(gc_col > prev_row);  // increasing in omega at fixed Omega
        prev_row = gc_col;
    }
}

TEST_CASE("constant energy bound") {
    for (double omega : {0.01, 0.3, 1.0, 2.5}) {
        CHECK(derive({omega, 1.0, 0.0}).e0 == doctest::Approx(-omega / 2).epsilon(1e-14));
        for (double g : {0.01, 0.2, 1.0})
            CHECK(derive({omega, 1.0, g}).e0 < -omega / 2);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(derive({0.0, 1.0, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(derive({-1.0, 1.0, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(derive({1.0, -1.0, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(derive({1.0, 1.0, -0.1}), std::invalid_argument);
    CHECK_NOTHROW(derive({1.0, 0.0, 0.1}));  // Omega = 0 is a valid limit
}

TEST_CASE("default parity is negative") {
    ModelParams p;
    CHECK(p.parity == Parity::negative);
    CHECK(parity_sign(p.parity) == -1.0);
}

TEST_CASE("region label names") {
    CHECK(to_string(RegionLabel::quadpolaron_normal) == "quadpolaron_normal");
    CHECK(to_string(RegionLabel::quadpolaron_overweighted) == "quadpolaron_overweighted");
    CHECK(to_string(RegionLabel::bipolaron) == "bipolaron");
    CHECK(to_string(RegionLabel::crossover) == "crossover");
}
