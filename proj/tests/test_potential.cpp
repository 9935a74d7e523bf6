#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rabi/exact.hpp"
#include "rabi/potential.hpp"

using namespace rabi;

namespace {

std::vector<double> make_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / double(n - 1);
    return g;
}

}  // namespace

TEST_CASE("Omega = 0: no tunneling potential") {
    ModelParams p{0.5, 0.0, 0.3};
    VariationalState s{1.0, 1.0, 1.0, 1.0, 1.0, 0.0};
    const PotentialProfile prof = potential_profile(s, p, make_grid(-6, 6, 101), Spin::up);
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        CHECK(prof.v_delta[i] == 0.0);
        CHECK(prof.v_total[i] == prof.v_bare[i]);
    }
}

TEST_CASE("g = 0 symmetric limit: constant delta v") {
    ModelParams p{0.1, 1.0, 0.0};
    VariationalState s{1.0, 1.0, 0.0, 0.0, 1.0, 0.0};
    const PotentialProfile prof = potential_profile(s, p, make_grid(-4, 4, 81), Spin::up);
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        REQUIRE(prof.defined[i]);
        CHECK(prof.v_delta[i] == doctest::Approx(-p.big_omega / p.omega).epsilon(1e-12));
    }
}

TEST_CASE("pointwise identity v_total = v_bare + v_delta and spin mirror") {
    ModelParams p{0.1, 1.0, 0.25};
    const VariationalSolution sol = optimize_ground(p);
    const auto grid = make_grid(-3, 3, 61);
    const PotentialProfile up = potential_profile(sol.state, p, grid, Spin::up);
    const PotentialProfile dn = potential_profile(sol.state, p, grid, Spin::down);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (up.defined[i]) CHECK(up.v_total[i] == up.v_bare[i] + up.v_delta[i]);
        // v_-(x) = v_+(-x); delta v_-(x) = delta v_+(-x)
        const std::size_t j = grid.size() - 1 - i;
        CHECK(dn.v_bare[i] == doctest::Approx(up.v_bare[j]).epsilon(1e-12));
        if (dn.defined[i] && up.defined[j])
            CHECK(dn.v_delta[i] == doctest::Approx(up.v_delta[j]).epsilon(1e-10));
    }
}

TEST_CASE("two-well structure and growing barrier beyond g_c") {
    ModelParams p{0.1, 1.0, 0.0};
    const DerivedParams d = derive(p);
    auto barrier = [&](double f) {
        ModelParams q = p;
        q.g = f * d.gc;
        const VariationalSolution sol = optimize_ground(q);
        const double gp = derive(q).gprime;
        const auto grid = make_grid(-1.5 * gp, 1.5 * gp, 301);
        const PotentialProfile prof = potential_profile(sol.state, q, grid, Spin::up);
        // well depth near -zeta_a g' and the ridge between the wells
        double vmin = 1e300, vbar = -1e300;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!prof.defined[i]) continue;
            vmin = std::min(vmin, prof.v_total[i]);
            if (std::abs(grid[i]) < 0.25 * gp) vbar = std::max(vbar, prof.v_total[i]);
        }
        return vbar - vmin;
    };
    const double b1 = barrier(1.25), b2 = barrier(1.6);
    CHECK(b1 > 0.0);
    CHECK(b2 > b1);
}

TEST_CASE("well expansion in the Omega = 0 parabola") {
    // g large enough that the candidate wells pass the separation precondition
    ModelParams p{0.5, 0.0, 0.9};
    VariationalState s{1.0, 1.0, 1.0, 1.0, 1.0, 0.0};
    const WellExpansion w = well_expansion(s, p, PacketSide::polaron);
    CHECK(w.x_min == doctest::Approx(-derive(p).gprime).epsilon(1e-14));
    CHECK(w.f1 == doctest::Approx(0.0).scale(1.0));
    CHECK(w.f2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.epsilon == 1.0);
}

TEST_CASE("well expansion matches finite differences") {
    ModelParams p{0.05, 1.0, 0.0};
    p.g = 1.6 * derive(p).gc;
    const VariationalSolution sol = optimize_ground(p);
    const double gp = derive(p).gprime;
    const double eta = -1.0;
    auto vtot = [&](double x) {
        const DeformedPacket pa{sol.state.xi_a, sol.state.zeta_a, PacketSide::polaron, 0};
        const DeformedPacket pb{sol.state.xi_b, sol.state.zeta_b, PacketSide::antipolaron, 0};
        auto psi = [&](double u) {
            return sol.state.alpha * pa.evaluate(u, gp) + sol.state.beta * pb.evaluate(u, gp);
        };
        return (x + gp) * (x + gp) + eta * (p.big_omega / p.omega) * psi(-x) / psi(x);
    };
    for (PacketSide side : {PacketSide::polaron, PacketSide::antipolaron}) {
        const WellExpansion w = well_expansion(sol.state, p, side);
        const double h = 1e-5 * std::max(1.0, std::abs(w.x_min));
        const double fd1 = (vtot(w.x_min + h) - vtot(w.x_min - h)) / (2 * h);
        const double fd2 = 0.5 * (vtot(w.x_min + h) - 2 * vtot(w.x_min) + vtot(w.x_min - h)) / (h * h);
        CHECK(w.f1 == doctest::Approx(fd1).epsilon(1e-5).scale(1.0));
        CHECK(w.f2 == doctest::Approx(fd2).epsilon(1e-4));
    }
}

TEST_CASE("wells-not-separated error below the changeover") {
    ModelParams p{0.1, 1.0, 0.0};
    p.g = 0.5 * derive(p).gc;
    const VariationalSolution sol = optimize_ground(p);
    CHECK_THROWS_WITH_AS(well_expansion(sol.state, p, PacketSide::polaron),
                         "well_expansion: wells not separated", std::runtime_error);
}

TEST_CASE("self-consistent conditions hold at the solution") {
    ModelParams p{0.001, 1.0, 0.0};
    p.g = 1.5 * derive(p).gc;
    const SelfConsistentSolution sc = self_consistent_solve(p);
    CHECK(sc.converged);
    // conditions 1-2 at the solved point, via the full analytic expansion
    const WellExpansion wa = well_expansion(sc.state, p, PacketSide::polaron);
    CHECK(std::abs(wa.f1) < 1e-6 * std::max(1.0, derive(p).gprime * derive(p).gprime));
    CHECK(std::abs(wa.f2 - sc.state.xi_a * sc.state.xi_a) < 1e-3);
}

TEST_CASE("self-consistent solve reproduces the scaling relation") {
    ModelParams p{0.001, 1.0, 0.0};
    const DerivedParams d = derive(p);
    for (double f : {1.3, 1.8, 2.5}) {
        p.g = f * d.gc;
        const SelfConsistentSolution sc = self_consistent_solve(p);
        CHECK(sc.converged);
        CHECK(std::abs(sc.state.xi_a - sc.state.zeta_a) < 0.01);
        CHECK(std::abs(sc.state.xi_b - sc.state.zeta_b) < 0.01);

        // and lands on the energy-minimization result
        const VariationalSolution var = optimize_ground(p);
        const double e_sc = energy(p, sc.state);
        CHECK(std::abs(e_sc - var.observables.energy) < 1e-3 * p.big_omega);
    }
}

TEST_CASE("self-consistent solve edge cases") {
    // Omega = 0: pure-polaron fixed point
    const SelfConsistentSolution sc = self_consistent_solve({0.5, 0.0, 0.4});
    CHECK(sc.converged);
    CHECK(sc.state.alpha == 1.0);
    CHECK(sc.state.beta == 0.0);
    CHECK(sc.state.zeta_a == 1.0);

    // below g_c the strong-coupling construction is rejected
    ModelParams weak{0.1, 1.0, 0.0};
    weak.g = 0.8 * derive(weak).gc;
    CHECK_THROWS_AS(self_consistent_solve(weak), std::runtime_error);
}

TEST_CASE("Schrodinger residual of the ED wavefunction") {
    // delta v is defined exactly by (omega/2)(-psi'' + v_tot psi) = (E - E0) psi
    ModelParams p{0.1, 1.0, 0.0};
    p.g = 1.3 * derive(p).gc;
    const DerivedParams d = derive(p);
    const EDSolution ed = ed_solve(p);
    const double gp = d.gprime;
    const int n = 1201;
    const auto grid = make_grid(-2.2 * gp, 2.2 * gp, n);
    const double h = grid[1] - grid[0];
    const WavefunctionSample w = ed_wavefunction(ed, p, grid);
    double peak = 0.0;
    for (double v : w.psi_up) peak = std::max(peak, std::abs(v));
    const double etilde = ed.energies[0] - d.e0;
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double psi = w.psi_up[i];
        if (std::abs(psi) < 1e-6 * peak) continue;  // stay clear of nodes
        const double lap = (w.psi_up[i + 1] - 2 * psi + w.psi_up[i - 1]) / (h * h);
        const double vb = (grid[i] + gp) * (grid[i] + gp);
        const double dv = -(p.big_omega / p.omega) * (-w.psi_down[i]) / psi;  // psi_-(x) = -psi_down
        const double resid = 0.5 * p.omega * (-lap + (vb + dv) * psi) - etilde * psi;
        worst = std::max(worst, std::abs(resid));
    }
    CHECK(worst < 1e-3 * p.big_omega * peak);
}
