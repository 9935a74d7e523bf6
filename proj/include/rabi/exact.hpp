// exact.hpp — truncated-Fock exact diagonalization of the single-mode model
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/variational.hpp"

namespace rabi {

struct EDConfig {
    int n_max{0};                    // photon truncation; 0 = auto max(32, ceil(8 (g/omega)^2))
    int n_levels{1};                 // requested eigenpairs
    double tol_convergence{1e-10};   // ground-energy change threshold on doubling n_max
    bool use_parity_reduction{true};
    int n_max_cap{4096};             // doubling stops here -> converged = false

    void validate() const;
};

struct EDSolution {
    std::vector<double> energies;              // ascending
    std::vector<Eigen::MatrixXd> coefficients; // per level: (n_max_used+1) x 2, columns (up, down)
    std::vector<Parity> parities;              // per level
    int n_max_used{0};
    bool converged{false};
};

// Assemble-and-diagonalize with auto-doubling truncation. With parity reduction the
// negative/positive blocks are real symmetric tridiagonal chains
//   diag_n = omega n + eta (Omega/2) (-1)^n,  offdiag_n = g sqrt(n+1),
// solved separately and merged; without it the full 2(n_max+1) matrix is handed to a
// dense symmetric eigensolver.
EDSolution ed_solve(const ModelParams& params, const EDConfig& cfg = {});

// Dense full-space Hamiltonian in the |n> x |sigma_z> basis (index 2 n + s, s=0 up).
Eigen::MatrixXd ed_hamiltonian(const ModelParams& params, int n_max);

// Ground-state observables from the Fock-basis eigenvector.
Observables ed_observables(const EDSolution& sol, const ModelParams& params);

// <P> = <sigma_x (-1)^{a'a}> of level `level`.
double ed_parity_expectation(const EDSolution& sol, int level = 0);

// Position-space components via stable normalized Hermite-function recurrence.
WavefunctionSample ed_wavefunction(const EDSolution& sol, const ModelParams& params,
                                   const std::vector<double>& x_grid, int level = 0);

}  // namespace rabi
