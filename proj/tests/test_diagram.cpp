#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rabi/diagram.hpp"
#include "rabi/io.hpp"

using namespace rabi;

namespace {

std::vector<double> gc_grid(const ModelParams& p, double lo, double hi, int n) {
    const double gc = derive(p).gc;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = gc * (lo + (hi - lo) * i / double(n - 1));
    return g;
}

}  // namespace

TEST_CASE("classification rules") {
    SweepConfig cfg;
    VariationalState s{1.0, 1.0, 1.0, 1.0, 1.0, 0.0};
    Observables o;

    // Omega = 0 degenerates to the bipolaron
    ModelParams pol{1.0, 0.0, 2.0};
    CHECK(classify(s, o, derive(pol), pol, cfg) == RegionLabel::bipolaron);

    // g = 0 endpoint
    ModelParams zero{0.1, 1.0, 0.0};
    CHECK(classify(s, o, derive(zero), zero, cfg) == RegionLabel::quadpolaron_normal);

    // crossover band
    ModelParams band{0.1, 1.0, 0.0};
    band.g = derive(band).gc * 1.05;
    CHECK(classify(s, o, derive(band), band, cfg) == RegionLabel::crossover);

    // dead left-right channels beyond the band: bipolaron
    ModelParams strong{0.1, 1.0, 0.0};
    strong.g = derive(strong).gc * 1.5;
    o.channels = {1e-6, 1e-7, 0.1, 0.1};
    CHECK(classify(s, o, derive(strong), strong, cfg) == RegionLabel::bipolaron);

    // live left-right channels below the band: quadpolaron, weight decides the flavor
    ModelParams weakp{0.1, 1.0, 0.0};
    weakp.g = derive(weakp).gc * 0.5;
    o.channels = {0.3, 0.2, 0.2, 0.2};
    VariationalState heavy_b = s;
    heavy_b.alpha = 0.4;
    heavy_b.beta = 0.75;
    CHECK(classify(s, o, derive(weakp), weakp, cfg) == RegionLabel::quadpolaron_normal);
    CHECK(classify(heavy_b, o, derive(weakp), weakp, cfg) ==
          RegionLabel::quadpolaron_overweighted);
}

TEST_CASE("sweep at high frequency keeps the polaron dominant below g_c") {
    ModelParams p{0.5, 1.0, 0.0};
    const auto cells = sweep_g(p, gc_grid(p, 0.05, 0.9, 12), {});
    for (const auto& c : cells) {
        CHECK(c.converged);
        CHECK(c.state.alpha >= c.state.beta);
    }
}

TEST_CASE("sweep at intermediate frequency shows a weight reversion window") {
    ModelParams p{0.15, 1.0, 0.0};
    const auto cells = sweep_g(p, gc_grid(p, 0.05, 1.0, 16), {});
    int reversed = 0;
    for (const auto& c : cells) reversed += c.state.beta > c.state.alpha;
    CHECK(reversed > 0);
}

TEST_CASE("sweep grid must ascend") {
    ModelParams p{0.5, 1.0, 0.0};
    CHECK_THROWS_AS(sweep_g(p, {0.2, 0.1}, {}), std::invalid_argument);
}

TEST_CASE("g = 0 endpoint cell") {
    ModelParams p{0.1, 1.0, 0.0};
    const auto cells = sweep_g(p, {0.0}, {});
    CHECK(cells[0].region == RegionLabel::quadpolaron_normal);
    CHECK_FALSE(cells[0].observables.gamma.has_value());
}

TEST_CASE("weight crossing window exists at 0.15 and not at 0.5") {
    BoundarySearchConfig cfg;
    cfg.grid_points = 33;
    const auto win = weight_crossing(0.15, 1.0, cfg);
    REQUIRE(win.has_value());
    const double gc = derive({0.15, 1.0, 0.0}).gc;
    CHECK(win->first < win->second);
    CHECK(win->second < gc);  // sub-g_c window

    CHECK_FALSE(weight_crossing(0.5, 1.0, cfg).has_value());
}

TEST_CASE("xi minimum sits near the analytic changeover") {
    BoundarySearchConfig cfg;
    cfg.grid_points = 41;
    cfg.g_over_gc_min = 0.3;
    cfg.g_over_gc_max = 1.7;
    for (double ratio : {0.15, 0.5}) {
        const double gc = derive({ratio, 1.0, 0.0}).gc;
        const double gmin = xi_minimum(ratio, 1.0, cfg);
        CHECK(std::abs(gmin - gc) / gc < 0.10);
    }
}

TEST_CASE("xi minimum error path at Omega = 0") {
    BoundarySearchConfig cfg;
    cfg.grid_points = 15;
    CHECK_THROWS_WITH_AS(xi_minimum(0.5, 0.0, cfg), "no interior minimum", std::runtime_error);
}

TEST_CASE("gamma maximum sits near the analytic changeover") {
    BoundarySearchConfig cfg;
    cfg.grid_points = 41;
    cfg.g_over_gc_min = 0.3;
    cfg.g_over_gc_max = 1.7;
    const double gc = derive({0.15, 1.0, 0.0}).gc;
    const double gmax = gamma_maximum(0.15, 1.0, cfg);
    CHECK(std::abs(gmax - gc) / gc < 0.10);
}

TEST_CASE("diagram build: totality, boundary placement, determinism") {
    const std::vector<double> ratios{0.08, 0.2, 0.45};
    GridSpec gs;
    gs.min = 0.1;
    gs.max = 1.8;
    gs.points = 9;
    SweepConfig cfg;
    const Diagram d1 = build_diagram(ratios, 1.0, gs, cfg);
    const Diagram d2 = build_diagram(ratios, 1.0, gs, cfg);
    REQUIRE(d1.cells.size() == ratios.size() * gs.points);

    // every cell labeled; gc curve inside each column's crossover band
    for (const auto& c : d1.cells) {
        const std::string label = to_string(c.region);
        CHECK(label != "unknown");
    }
    for (const auto& curve : d1.curves) {
        if (curve.kind != BoundaryKind::gc_analytic) continue;
        REQUIRE(curve.points.size() == ratios.size());
        for (std::size_t r = 0; r < ratios.size(); ++r) {
            const double gc = derive({ratios[r], 1.0, 0.0}).gc;
            CHECK(curve.points[r].second == doctest::Approx(gc).epsilon(1e-14));
        }
    }

    // byte-identical CSV across repeated builds
    std::string csv1 = io::cells_csv_header(false) + "\n";
    for (const auto& c : d1.cells) csv1 += io::cell_csv_row(c, false) + "\n";
    std::string csv2 = io::cells_csv_header(false) + "\n";
    for (const auto& c : d2.cells) csv2 += io::cell_csv_row(c, false) + "\n";
    CHECK(csv1 == csv2);
}

TEST_CASE("CSV schema matches the declared header") {
    CHECK(io::cells_csv_header(false) ==
          "omega,bigOmega,g,g_over_gc,region,gamma,energy,photon_number,sigma_x,coupling_corr,"
          "alpha,beta,xiA,xiB,zetaA,zetaB,ch_aa,ch_bb,ch_ab,ch_ba,converged");
}
