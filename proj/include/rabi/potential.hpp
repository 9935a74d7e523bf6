// potential.hpp — single-particle picture: tunneling-induced potential, well expansion,
// and the self-consistent determination of the deformation parameters
#pragma once

#include <vector>

#include "rabi/core.hpp"
#include "rabi/variational.hpp"

namespace rabi {

enum class Spin { up, down };

struct PotentialProfile {
    std::vector<double> x;
    std::vector<double> v_bare;    // (x +- g')^2
    std::vector<double> v_delta;   // eta (Omega/omega) psi_opposite / psi_same; NaN where undefined
    std::vector<double> v_total;
    std::vector<double> psi_up;    // psi_+(x)
    std::vector<double> psi_down;  // eta psi_+(-x)
    std::vector<bool> defined;     // false where |psi_same| fell below the floor
    Spin spin{Spin::up};
};

// Sampled bare, tunneling-induced, and total potential for the requested spin.
// Points where the carrier wavefunction is below 1e-12 of its grid maximum are
// marked undefined (delta v has poles at the nodes).
PotentialProfile potential_profile(const VariationalState& state, const ModelParams& params,
                                   const std::vector<double>& grid, Spin spin);

struct WellExpansion {
    double x_min{0.0};    // -zeta_a g' (polaron) or +zeta_b g' (antipolaron), spin-up potential
    double f1{0.0};       // d v_tot / dx at x_min
    double f2{0.0};       // (1/2) d^2 v_tot / dx^2 at x_min
    double epsilon{0.0};  // local oscillator level xi_i (in units of omega/2)
};

// Analytic expansion of v_+^tot around the chosen well minimum. Throws when the
// two candidate wells are closer than their combined radii r_i = 2/sqrt(xi_i).
WellExpansion well_expansion(const VariationalState& state, const ModelParams& params,
                             PacketSide well);

struct SelfConsistentConfig {
    double damping{0.5};
    int max_iter{200};
    double tol_residual{1e-12};
};

struct SelfConsistentSolution {
    VariationalState state{};
    bool converged{false};
    int iterations{0};
    double residual{0.0};
};

// Solves conditions 1-3 (well minima, matched local frequencies, degenerate local
// levels) with the strong-coupling single-packet approximants for delta v, by damped
// Newton iteration seeded from the symmetric-approximation parameters. Requires
// g > g_c; throws if an iterate leaves the separated-well domain.
SelfConsistentSolution self_consistent_solve(const ModelParams& params,
                                             const SelfConsistentConfig& cfg = {});

}  // namespace rabi
