#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "quadrature.hpp"
#include "rabi/overlaps.hpp"

using namespace rabi;

TEST_CASE("overlap_s closed cases") {
    // zero net displacement, equal frequencies: identical Gaussians
    CHECK(overlap_s(1.0, -1.0, 0.7, 0.7, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    // unit displacement pair
    CHECK(overlap_s(1.0, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // pure width mismatch
    CHECK(overlap_s(0.5, -0.5, 1.0, 4.0, 2.0) ==
          doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("overlap_s symmetry and Cauchy-Schwarz") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xi(0.2, 3.0), ze(-1.5, 1.5), gp(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double z1 = ze(rng), z2 = ze(rng), x1 = xi(rng), x2 = xi(rng), g = gp(rng);
        const double s = overlap_s(z1, z2, x1, x2, g);
        CHECK(s == overlap_s(z2, z1, x2, x1, g));  // exact swap symmetry
        CHECK(std::abs(s) <= 1.0 + 1e-15);
    }
    // equality only for identical packets
    CHECK(overlap_s(0.3, -0.3, 1.3, 1.3, 2.0) == doctest::Approx(1.0));
    CHECK(overlap_s(0.3, -0.3, 1.3, 1.4, 2.0) < 1.0);
    CHECK(overlap_s(0.3, -0.2, 1.3, 1.3, 2.0) < 1.0);
}

TEST_CASE("overlap_s input validation") {
    CHECK_THROWS_AS(overlap_s(0.0, 0.0, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(overlap_s(0.0, 0.0, 1.0, -2.0, 1.0), std::invalid_argument);
}

TEST_CASE("ground moments: stated examples") {
    const GroundMoments m = ground_moments(1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(m.x1 == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    // zero displacement kills the linear term
    const GroundMoments z = ground_moments(0.7, -0.2, 1.1, 0.8, 0.0);
    CHECK(z.x1 == 0.0);
    CHECK(z.x2 == doctest::Approx(z.s / (1.1 + 0.8)).epsilon(1e-14));

    // quadrature at g' = 2
    const GroundMoments q = ground_moments(1.0, 1.0, 1.0, 1.0, 2.0);
    CHECK(q.s == doctest::Approx(test::overlap_oracle(0, 0, 1, 1, 1, 1, 2.0)).epsilon(1e-12));
    CHECK(q.x1 == doctest::Approx(test::overlap_oracle(0, 0, 1, 1, 1, 1, 2.0, 1)).epsilon(1e-12));
    CHECK(q.x2 == doctest::Approx(test::overlap_oracle(0, 0, 1, 1, 1, 1, 2.0, 2)).epsilon(1e-12));
}

TEST_CASE("hermite polynomials") {
    CHECK(hermite(0, 0.3) == 1.0);
    CHECK(hermite(0, -7.0) == 1.0);
    CHECK(hermite(2, 1.0) == doctest::Approx(2.0));
    // explicit coefficient expansion H_5 = 32 x^5 - 160 x^3 + 120 x
    const double x = 0.7;
    const double h5 = 32 * std::pow(x, 5) - 160 * std::pow(x, 3) + 120 * x;
    CHECK(hermite(5, x) == doctest::Approx(h5).epsilon(1e-14));
    CHECK_THROWS_AS(hermite(-1, 0.0), std::invalid_argument);
}

TEST_CASE("hermite_scaled handles negative eps") {
    // eps^{m/2} H_m(y/sqrt(eps)) as a polynomial: compare against the naive form
    for (double eps : {0.25, 1.7}) {
        for (int m : {0, 1, 2, 3, 4, 5}) {
            const double y = 0.37;
            const double naive = std::pow(eps, 0.5 * m) * hermite(m, y / std::sqrt(eps));
            CHECK(hermite_scaled(m, eps, y) == doctest::Approx(naive).epsilon(1e-12));
        }
    }
    CHECK(std::isfinite(hermite_scaled(3, -0.8, 0.4)));
    CHECK(hermite_scaled(0, -0.8, 0.4) == 1.0);
}

TEST_CASE("cross-level overlap reductions") {
    // k = k' = 0 reduces to the Gaussian overlap
    CHECK(cross_level_overlap(0, 0, 0.9, 0.4, 1.2, 0.7, 1.8) ==
          doctest::Approx(overlap_s(0.9, 0.4, 1.2, 0.7, 1.8)).epsilon(1e-13));
    // same-frequency orthogonality at zero net displacement
    CHECK(cross_level_overlap(1, 0, 0.5, -0.5, 1.0, 1.0, 2.0) == doctest::Approx(0.0));
    // quadrature at the stated (1,1) point
    CHECK(cross_level_overlap(1, 1, 0.25, 0.25, 1.0, 1.3, 1.0) ==
          doctest::Approx(test::overlap_oracle(1, 1, 0.25, 0.25, 1.0, 1.3, 1.0)).epsilon(1e-12));
}

TEST_CASE("cross-level overlap swap symmetry carries (-1)^{k+k'}") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xi(0.2, 3.0), ze(-1.5, 1.5), gp(0.0, 5.0);
    std::uniform_int_distribution<int> lev(0, 4);
    for (int i = 0; i < 100; ++i) {
        const int k = lev(rng), kp = lev(rng);
        const double z1 = ze(rng), z2 = ze(rng), x1 = xi(rng), x2 = xi(rng), g = gp(rng);
        const double a = cross_level_overlap(k, kp, z1, z2, x1, x2, g);
        const double b = cross_level_overlap(kp, k, z2, z1, x2, x1, g);
        const double sign = ((k + kp) % 2 == 0) ? 1.0 : -1.0;
        CHECK(a == doctest::Approx(sign * b).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("generalized moment reductions at n = 0") {
    const double z1 = 0.8, z2 = -0.3, x1 = 1.4, x2 = 0.6, g = 2.2;
    CHECK(generalized_moment(0, 0, z1, z2, x1, x2, g) ==
          doctest::Approx(overlap_s(z1, z2, x1, x2, g)).epsilon(1e-13));
    const GroundMoments m = ground_moments(z1, z2, x1, x2, g);
    CHECK(generalized_moment(0, 1, z1, z2, x1, x2, g) == doctest::Approx(m.x1).epsilon(1e-12));
    CHECK(generalized_moment(0, 2, z1, z2, x1, x2, g) == doctest::Approx(m.x2).epsilon(1e-12));
}

TEST_CASE("generalized moment at n=2, j=2 equals quadrature") {
    const double v = generalized_moment(2, 2, 0.9, 0.8, 1.1, 0.9, 1.5);
    CHECK(v == doctest::Approx(test::overlap_oracle(2, 2, 0.9, 0.8, 1.1, 0.9, 1.5, 2))
                   .epsilon(1e-12));
}

TEST_CASE("randomized quadrature agreement for every closed form") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> xi(0.2, 3.0), ze(-1.5, 1.5), gp(0.0, 5.0);
    std::uniform_int_distribution<int> lev(0, 4);
    double worst = 0.0;
    for (int i = 0; i < 120; ++i) {
        const double z1 = ze(rng), z2 = ze(rng), x1 = xi(rng), x2 = xi(rng), g = gp(rng);
        const int k = lev(rng), kp = lev(rng), n = lev(rng), j = lev(rng);
        worst = std::max(worst, std::abs(cross_level_overlap(k, kp, z1, z2, x1, x2, g) -
                                         test::overlap_oracle(k, kp, z1, z2, x1, x2, g)));
        worst = std::max(worst, std::abs(generalized_moment(n, j, z1, z2, x1, x2, g) -
                                         test::overlap_oracle(n, n, z1, z2, x1, x2, g, j)));
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("reflected overlap set against direct integrals") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> xi(0.3, 2.5), ze(0.1, 1.2), gp(0.5, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double za = ze(rng), zb = ze(rng), xa = xi(rng), xb = xi(rng), g = gp(rng);
        for (int n : {0, 1, 2, 3}) {
            const OverlapSet s = overlap_set(n, za, zb, xa, xb, g);
            const DeformedPacket pa{xa, za, PacketSide::polaron, n};
            const DeformedPacket pb{xb, zb, PacketSide::antipolaron, n};
            // direct integrals of phi_i(x) phi_j(-x): reflect the second packet by hand
            auto reflected = [&](const DeformedPacket& p1, const DeformedPacket& p2) {
                const double width = 14.0 / std::sqrt(std::min(p1.xi, p2.xi)) + 1.0;
                const double lo = std::min(p1.center(g), -p2.center(g)) - width;
                const double hi = std::max(p1.center(g), -p2.center(g)) + width;
                return test::integrate(
                    [&](double x) { return p1.evaluate(x, g) * p2.evaluate(-x, g); }, lo, hi);
            };
            CHECK(s.s_ab_bar == doctest::Approx(reflected(pa, pb)).epsilon(1e-11).scale(1.0));
            CHECK(s.s_aa_bar == doctest::Approx(reflected(pa, pa)).epsilon(1e-11).scale(1.0));
            CHECK(s.s_bb_bar == doctest::Approx(reflected(pb, pb)).epsilon(1e-11).scale(1.0));
        }
    }
}

TEST_CASE("packet evaluation and derivatives") {
    const DeformedPacket p{1.3, 0.6, PacketSide::polaron, 2};
    const double g = 1.7, x = 0.45, h = 1e-5;
    const double fd1 = (p.evaluate(x + h, g) - p.evaluate(x - h, g)) / (2 * h);
    const double fd2 = (p.evaluate(x + h, g) - 2 * p.evaluate(x, g) + p.evaluate(x - h, g)) / (h * h);
    CHECK(p.derivative(x, g) == doctest::Approx(fd1).epsilon(1e-8));
    CHECK(p.second_derivative(x, g) == doctest::Approx(fd2).epsilon(1e-5));
    // normalization
    const double norm = test::packet_moment(p, p, 0, 0.0, g);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}
