// multimode.hpp — M-mode extension: product trial state, optimizer, two-mode benchmark
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/variational.hpp"

namespace rabi {

struct Mode {
    double omega{1.0};
    double g{0.0};
};

struct ModeParams {
    std::vector<Mode> modes;   // at least one, every omega_k > 0
    double big_omega{1.0};
    Parity parity{Parity::negative};

    void validate() const;
};

struct ModeDeformation {
    double xi_a{1.0};
    double xi_b{1.0};
    double zeta_a{0.0};
    double zeta_b{0.0};
};

struct MultimodeState {
    std::vector<ModeDeformation> modes;
    double alpha{1.0};
    double beta{0.0};  // from alpha and the product of direct overlaps
};

struct ModeObservables {
    double photon_number{0.0};
    double coupling_corr{0.0};
    double t{0.0};
    std::optional<double> gamma{};
};

struct MultimodeSolution {
    MultimodeState state{};
    double energy{0.0};
    double tunneling{0.0};  // <sigma_x>
    std::vector<ModeObservables> per_mode{};
    bool converged{false};
    int objective_evals{0};
    int restarts_used{0};
};

// Product-ansatz energy; reduces exactly to the single-mode energy at M = 1.
double multimode_energy(const ModeParams& modes, const MultimodeState& state);

MultimodeSolution multimode_optimize(const ModeParams& modes, const OptimizerConfig& cfg = {},
                                     int mode_cap = 16);

struct TwoModeEDConfig {
    int n1{0};                      // per-mode truncations; 0 = auto max(16, ceil(8 (g_k/omega_k)^2))
    int n2{0};
    int n_levels{1};
    double tol_convergence{1e-10};  // ground-energy change threshold on per-mode doubling
    long basis_cap{200000};         // total |n1> x |n2> x |sigma| basis states
};

struct TwoModeEDSolution {
    std::vector<double> energies;
    Eigen::VectorXd ground;  // parity-eta chain coefficients, index a*(n2_used+1)+b
    int n1_used{0};
    int n2_used{0};
    bool converged{false};
};

// Banded symmetric diagonalization of the negative-parity block of the two-mode
// Hamiltonian, with per-mode auto-doubling convergence on the ground energy.
TwoModeEDSolution two_mode_ed(const ModeParams& modes, const TwoModeEDConfig& cfg = {});

}  // namespace rabi
