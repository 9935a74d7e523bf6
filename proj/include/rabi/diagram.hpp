// diagram.hpp — coupling sweeps, region classification, boundary finders, phase diagram
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/exact.hpp"
#include "rabi/variational.hpp"

namespace rabi {

struct DiagramCell {
    double omega{0.0};
    double big_omega{0.0};
    double g{0.0};
    double g_over_gc{0.0};
    RegionLabel region{RegionLabel::quadpolaron_normal};
    VariationalState state{};
    Observables observables{};
    std::optional<Observables> ed{};  // cross-check columns when requested
    bool converged{false};
};

struct SweepConfig {
    double channel_floor{1e-3};    // weighted-overlap threshold for a live channel
    double crossover_band{0.10};   // crossover band half-width, relative to g_c
    bool with_ed{false};
    OptimizerConfig opt{};
    EDConfig ed{};
    int threads{0};                // 0 = hardware concurrency (rows only; g-chains stay serial)
};

// Warm-started sweep along an ascending g grid at fixed (omega, big_omega).
// Per-point convergence lands in the cell flags; the sweep itself never aborts.
std::vector<DiagramCell> sweep_g(const ModelParams& params_template,
                                 const std::vector<double>& g_grid, const SweepConfig& cfg = {});

RegionLabel classify(const VariationalState& state, const Observables& obs,
                     const DerivedParams& derived, const ModelParams& params,
                     const SweepConfig& cfg = {});

struct BoundarySearchConfig {
    double g_over_gc_min{0.05};
    double g_over_gc_max{1.25};
    int grid_points{49};
    double tol_g{1e-4};       // absolute, units of big_omega
    SweepConfig sweep{};
};

// Couplings bracketing the overweighted-antipolaron window (beta > alpha), found by
// bisection on sign(alpha - beta); empty when no reversion exists.
std::optional<std::pair<double, double>> weight_crossing(double omega_ratio, double big_omega,
                                                         const BoundarySearchConfig& cfg = {});

// g at the interior minimum of the sweep-interpolated average frequency
// renormalization (golden-section on a cubic interpolant). Throws
// "no interior minimum" when the average is monotone over the scanned range.
double xi_minimum(double omega_ratio, double big_omega, const BoundarySearchConfig& cfg = {});

// g at the interior maximum of the variational scaling quantity gamma.
double gamma_maximum(double omega_ratio, double big_omega, const BoundarySearchConfig& cfg = {});

enum class BoundaryKind { gc_analytic, xi_minimum, weight_crossing_lower, weight_crossing_upper };

std::string to_string(BoundaryKind k);

struct BoundaryCurve {
    BoundaryKind kind{BoundaryKind::gc_analytic};
    std::vector<std::pair<double, double>> points;  // (omega_ratio, g), sorted by omega_ratio
};

struct GridSpec {
    double min{0.05};  // in units of g_c per column
    double max{2.0};
    int points{20};
};

struct Diagram {
    std::vector<DiagramCell> cells;  // row-major: omega index outer, g index inner
    std::vector<BoundaryCurve> curves;
};

// Full (omega_ratio, g) grid evaluation plus the four boundary curves.
// Deterministic for a fixed config: rows are independent tasks, cells gathered by
// index, warm starts chained only within a row.
Diagram build_diagram(const std::vector<double>& omega_ratios, double big_omega,
                      const GridSpec& g_grid, const SweepConfig& cfg = {});

}  // namespace rabi
