// variational.hpp — deformed polaron-antipolaron ansatz: energy, observables, optimizers
#pragma once

#include <optional>
#include <vector>

#include "rabi/core.hpp"
#include "rabi/overlaps.hpp"

namespace rabi {

// The five free deformation parameters plus the derived antipolaron weight.
struct VariationalState {
    double xi_a{1.0};     // polaron frequency renormalization, > 0
    double xi_b{1.0};     // antipolaron frequency renormalization, > 0
    double zeta_a{0.0};   // polaron displacement renormalization
    double zeta_b{0.0};   // antipolaron displacement renormalization
    double alpha{1.0};    // polaron weight in [0, 1]
    double beta{0.0};     // antipolaron weight, fixed by normalization
};

struct Channels {
    double aa{0.0};  // alpha^2 S_{alpha alphabar}
    double bb{0.0};  // beta^2 S_{beta betabar}
    double ab{0.0};  // alpha beta S_{alpha betabar}
    double ba{0.0};  // alpha beta S_{beta alphabar} (= ab at equal levels)
};

struct Observables {
    double energy{0.0};
    double photon_number{0.0};          // <a'a>
    double coupling_corr{0.0};          // <sigma_z (a' + a)>
    double tunneling{0.0};              // <sigma_x>
    double t{0.0};                      // -<(a' - a)^2>
    std::optional<double> gamma{};      // scaling quantity; undefined at g = 0
    Channels channels{};
};

enum class ConstraintSet { full, no_squeeze, symmetric };

struct OptimizerConfig {
    double tol_energy{0.0};        // simplex f-spread; 0 = auto (1e-12 * max(Omega, omega))
    double tol_param{1e-8};        // simplex spread in transformed coordinates
    int max_evals{20000};          // per start
    int max_restarts{3};           // polish restarts from the incumbent best
    double init_step{0.2};         // initial simplex edge
    std::optional<VariationalState> warm_start{};
};

struct VariationalSolution {
    VariationalState state{};
    Observables observables{};
    bool converged{false};
    int restarts_used{0};
    int objective_evals{0};
    int level{0};
    Parity physical_parity{Parity::negative};  // alternates along the excited tower
};

// Antipolaron weight from the normalization <psi|psi> = 1.
double beta_from_alpha(double alpha, double s_ab);

// Variational energy of the level-n trial state. The tunneling sign is
// parity_sign(params.parity); the reflected level-n overlaps carry their (-1)^n
// factor. n = 0 uses the closed ground-state forms.
double energy(const ModelParams& params, const VariationalState& state, int n = 0);

// Level-n energy evaluated through the generalized-moment path for every n
// (the n = 0 result must coincide with energy(..., 0) to machine precision).
double energy_generalized(const ModelParams& params, const VariationalState& state, int n);

Observables observables(const ModelParams& params, const VariationalState& state);

VariationalSolution optimize_ground(const ModelParams& params, const OptimizerConfig& cfg = {});

VariationalSolution optimize_constrained(const ModelParams& params, ConstraintSet constraints,
                                         const OptimizerConfig& cfg = {});

// AA/GRWA comparison baseline.
double aa_grwa_ground(const ModelParams& params);
// Lowest `count` AA levels: n omega - g^2/omega +- (Omega/2) e^{-2(g/omega)^2} L_n(4(g/omega)^2).
std::vector<double> aa_grwa_levels(const ModelParams& params, int count);

// Level-n trial state optimized on the same five parameters. params.parity selects
// the tunneling branch; the state's physical parity is parity * (-1)^n, so the
// negative-parity input walks the physical tower (E -> n omega - Omega/2 at g = 0).
VariationalSolution excited_energy(const ModelParams& params, int n, const OptimizerConfig& cfg = {});

// Lowest `count` energies of the two-branch tower {(n, parity)} sorted ascending.
std::vector<VariationalSolution> variational_levels(const ModelParams& params, int count,
                                                    const OptimizerConfig& cfg = {});

struct WavefunctionSample {
    std::vector<double> x;
    std::vector<double> psi_up;    // psi_+(x)
    std::vector<double> psi_down;  // eta * psi_+(-x)
};

WavefunctionSample wavefunction_eval(const VariationalState& state, const ModelParams& params,
                                     const std::vector<double>& x_grid, int level = 0);

}  // namespace rabi
