#include "rabi/exact.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rabi {

namespace {

constexpr double kPi = 3.14159265358979323846;

int auto_n_max(const ModelParams& p) {
    const double r = p.g / p.omega;
    return std::max(32, int(std::ceil(8.0 * r * r)));
}

struct ChainEig {
    std::vector<double> values;
    Eigen::MatrixXd vectors;  // (n_max+1) x n_levels
};

// lowest eigenpairs of the parity-eta tridiagonal chain
ChainEig solve_chain(const ModelParams& p, double eta, int n_max, int n_levels) {
    const int n = n_max + 1;
    std::vector<double> diag(n), off(std::max(n - 1, 1));
    for (int k = 0; k < n; ++k)
        diag[k] = p.omega * k + eta * 0.5 * p.big_omega * ((k % 2 == 0) ? 1.0 : -1.0);
    for (int k = 0; k + 1 < n; ++k) off[k] = p.g * std::sqrt(double(k + 1));

    const int m_want = std::min(n_levels, n);
    ChainEig out;
    out.values.resize(m_want);
    out.vectors.resize(n, m_want);
    std::vector<lapack_int> isuppz(2 * std::max(m_want, 1));
    lapack_int m = 0;
    const lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, m_want, 0.0, &m,
        out.values.data(), out.vectors.data(), n, isuppz.data());
    if (info != 0) throw std::runtime_error("ed_solve: LAPACK dstevr failed");
    out.values.resize(m);
    return out;
}

// merge parity-chain eigenpairs into Fock-basis coefficient tables
EDSolution assemble_parity(const ModelParams& p, int n_max, int n_levels) {
    struct Entry {
        double e;
        double eta;
        int idx;
    };
    const ChainEig neg = solve_chain(p, -1.0, n_max, n_levels);
    const ChainEig pos = solve_chain(p, +1.0, n_max, n_levels);
    std::vector<Entry> entries;
    for (int i = 0; i < int(neg.values.size()); ++i) entries.push_back({neg.values[i], -1.0, i});
    for (int i = 0; i < int(pos.values.size()); ++i) entries.push_back({pos.values[i], +1.0, i});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.e < b.e; });
    if (int(entries.size()) > n_levels) entries.resize(n_levels);

    EDSolution sol;
    sol.n_max_used = n_max;
    const double isq2 = 1.0 / std::sqrt(2.0);
    for (const Entry& en : entries) {
        const ChainEig& ch = en.eta < 0 ? neg : pos;
        Eigen::MatrixXd c(n_max + 1, 2);
        for (int k = 0; k <= n_max; ++k) {
            const double v = ch.vectors(k, en.idx);
            const double sgn = en.eta * ((k % 2 == 0) ? 1.0 : -1.0);  // sigma_x eigenvalue of |k>
            c(k, 0) = v * isq2;
            c(k, 1) = v * sgn * isq2;
        }
        sol.energies.push_back(en.e);
        sol.coefficients.push_back(std::move(c));
        sol.parities.push_back(en.eta < 0 ? Parity::negative : Parity::positive);
    }
    return sol;
}

EDSolution assemble_full(const ModelParams& p, int n_max, int n_levels) {
    const Eigen::MatrixXd H = ed_hamiltonian(p, n_max);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("ed_solve: dense eigensolver failed");
    EDSolution sol;
    sol.n_max_used = n_max;
    const int m = std::min<int>(n_levels, int(H.rows()));
    for (int l = 0; l < m; ++l) {
        sol.energies.push_back(es.eigenvalues()(l));
        Eigen::MatrixXd c(n_max + 1, 2);
        for (int k = 0; k <= n_max; ++k) {
            c(k, 0) = es.eigenvectors()(2 * k, l);
            c(k, 1) = es.eigenvectors()(2 * k + 1, l);
        }
        double par = 0.0;
        for (int k = 0; k <= n_max; ++k)
            par += ((k % 2 == 0) ? 1.0 : -1.0) * 2.0 * c(k, 0) * c(k, 1);
        sol.parities.push_back(par < 0 ? Parity::negative : Parity::positive);
        sol.coefficients.push_back(std::move(c));
    }
    return sol;
}

}  // namespace

void EDConfig::validate() const {
    if (n_max != 0 && n_max < 4) throw std::invalid_argument("EDConfig: n_max must be >= 4");
    if (n_levels < 1) throw std::invalid_argument("EDConfig: n_levels must be >= 1");
    if (!(tol_convergence > 0.0))
        throw std::invalid_argument("EDConfig: tol_convergence must be > 0");
}

Eigen::MatrixXd ed_hamiltonian(const ModelParams& p, int n_max) {
    p.validate();
    const int dim = 2 * (n_max + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n <= n_max; ++n) {
        for (int s = 0; s < 2; ++s) {
            const int i = 2 * n + s;
            H(i, i) = p.omega * n;
            H(2 * n + s, 2 * n + (1 - s)) = 0.5 * p.big_omega;
            if (n + 1 <= n_max) {
                const double sz = (s == 0) ? 1.0 : -1.0;
                const int j = 2 * (n + 1) + s;
                H(i, j) = p.g * sz * std::sqrt(double(n + 1));
                H(j, i) = H(i, j);
            }
        }
    }
    return H;
}

EDSolution ed_solve(const ModelParams& p, const EDConfig& cfg) {
    p.validate();
    cfg.validate();
    int n_max = cfg.n_max > 0 ? cfg.n_max : auto_n_max(p);
    n_max = std::min(n_max, cfg.n_max_cap);

    auto solve_at = [&](int nm) {
        return cfg.use_parity_reduction ? assemble_parity(p, nm, cfg.n_levels)
                                        : assemble_full(p, nm, cfg.n_levels);
    };

    EDSolution sol = solve_at(n_max);
    const double scale = std::max({p.omega, p.big_omega, std::abs(sol.energies.front())});
    while (true) {
        if (2 * n_max > cfg.n_max_cap) {
            sol.converged = false;  // truncation not converged within the cap
            return sol;
        }
        EDSolution next = solve_at(2 * n_max);
        const bool ok = std::abs(next.energies.front() - sol.energies.front()) <
                        cfg.tol_convergence * scale;
        n_max *= 2;
        sol = std::move(next);
        if (ok) {
            sol.converged = true;
            return sol;
        }
    }
}

double ed_parity_expectation(const EDSolution& sol, int level) {
    const Eigen::MatrixXd& c = sol.coefficients.at(level);
    double par = 0.0;
    for (int k = 0; k < c.rows(); ++k)
        par += ((k % 2 == 0) ? 1.0 : -1.0) * 2.0 * c(k, 0) * c(k, 1);
    return par;
}

Observables ed_observables(const EDSolution& sol, const ModelParams& p) {
    if (sol.coefficients.empty()) throw std::invalid_argument("ed_observables: empty solution");
    const Eigen::MatrixXd& c = sol.coefficients.front();
    const int rows = int(c.rows());
    Observables o;
    o.energy = sol.energies.front();
    double nph = 0.0, sx = 0.0, coup = 0.0, aa2 = 0.0;
    for (int n = 0; n < rows; ++n) {
        const double w = c(n, 0) * c(n, 0) + c(n, 1) * c(n, 1);
        nph += double(n) * w;
        sx += 2.0 * c(n, 0) * c(n, 1);
        if (n + 1 < rows) {
            const double amp = 2.0 * std::sqrt(double(n + 1));
            coup += amp * (c(n, 0) * c(n + 1, 0) - c(n, 1) * c(n + 1, 1));
        }
        if (n + 2 < rows) {
            const double amp = 2.0 * std::sqrt(double(n + 1) * double(n + 2));
            aa2 += amp * (c(n, 0) * c(n + 2, 0) + c(n, 1) * c(n + 2, 1));
        }
    }
    o.photon_number = std::max(nph, 0.0);
    o.tunneling = sx;
    o.coupling_corr = coup;
    o.t = 2.0 * nph + 1.0 - aa2;
    if (p.g > 0.0) {
        const double inside = o.photon_number - 0.25 * (o.t + 1.0 / o.t) + 0.5;
        o.gamma = p.omega / (p.g * o.t) * std::sqrt(std::max(inside, 0.0));
    }
    return o;
}

WavefunctionSample ed_wavefunction(const EDSolution& sol, const ModelParams& p,
                                   const std::vector<double>& x_grid, int level) {
    const Eigen::MatrixXd& c = sol.coefficients.at(level);
    const int n_max = int(c.rows()) - 1;
    WavefunctionSample w;
    w.x = x_grid;
    w.psi_up.reserve(x_grid.size());
    w.psi_down.reserve(x_grid.size());
    const double sq2 = std::sqrt(2.0);
    for (double x : x_grid) {
        // accumulate sum_n c_{n,sigma} phi_n(x) with one upward recurrence
        double prev = 0.0;
        double cur = std::pow(1.0 / kPi, 0.25) * std::exp(-0.5 * x * x);
        double up = 0.0, down = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            up += c(n, 0) * cur;
            down += c(n, 1) * cur;
            const double next = std::sqrt(2.0 / double(n + 1)) * x * cur -
                                std::sqrt(double(n) / double(n + 1)) * prev;
            prev = cur;
            cur = next;
            if (!std::isfinite(cur)) throw std::runtime_error("ed_wavefunction: recurrence overflow");
        }
        w.psi_up.push_back(sq2 * up);
        w.psi_down.push_back(sq2 * down);
    }
    return w;
}

}  // namespace rabi
