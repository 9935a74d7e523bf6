#include "rabi/multimode.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rabi/nelder_mead.hpp"

namespace rabi {

namespace {

struct ModeTerms {
    double s_ab, s_ab_bar, s_aa_bar, s_bb_bar;
    double haa, hbb, hab;
    double h0aa, h0bb, h0ab;
    double x1, x2, s;  // ground moments
    double gp;
};

ModeTerms mode_terms(const Mode& m, const ModeDeformation& d) {
    ModeTerms t{};
    t.gp = std::sqrt(2.0) * m.g / m.omega;
    const GroundMoments gm = ground_moments(d.zeta_a, d.zeta_b, d.xi_a, d.xi_b, t.gp);
    t.s = gm.s;
    t.x1 = gm.x1;
    t.x2 = gm.x2;
    const OverlapSet ov = overlap_set(0, d.zeta_a, d.zeta_b, d.xi_a, d.xi_b, t.gp);
    t.s_ab = ov.s_ab;
    t.s_ab_bar = ov.s_ab_bar;
    t.s_aa_bar = ov.s_aa_bar;
    t.s_bb_bar = ov.s_bb_bar;
    const double om = m.omega;
    const double ca = 1.0 - d.zeta_a, cb = 1.0 + d.zeta_b;
    t.haa = 0.5 * om * (0.5 * (d.xi_a + 1.0 / d.xi_a) + ca * ca * t.gp * t.gp);
    t.hbb = 0.5 * om * (0.5 * (d.xi_b + 1.0 / d.xi_b) + cb * cb * t.gp * t.gp);
    t.hab = 0.5 * om *
            ((1.0 - d.xi_a * d.xi_a) * t.x2 + 2.0 * ca * t.gp * t.x1 + d.xi_a * t.s +
             ca * ca * t.gp * t.gp * t.s);
    t.h0aa = 0.5 * om * (0.5 * (d.xi_a + 1.0 / d.xi_a) + d.zeta_a * d.zeta_a * t.gp * t.gp);
    t.h0bb = 0.5 * om * (0.5 * (d.xi_b + 1.0 / d.xi_b) + d.zeta_b * d.zeta_b * t.gp * t.gp);
    t.h0ab = 0.5 * om *
             ((1.0 - d.xi_a * d.xi_a) * t.x2 - 2.0 * d.zeta_a * t.gp * t.x1 + d.xi_a * t.s +
              d.zeta_a * d.zeta_a * t.gp * t.gp * t.s);
    return t;
}

int auto_trunc(const Mode& m) {
    const double r = m.g / m.omega;
    return std::max(16, int(std::ceil(8.0 * r * r)));
}

// mode-1 ladder moves by n2+1, mode-2 ladder by 1; half-bandwidth kd = n2+1
struct BlockDiag {
    std::vector<double> diag;
    std::vector<double> off1;   // mode-2 coupling, offset 1 (zero across a-block seams)
    std::vector<double> offk;   // mode-1 coupling, offset kd
    int kd{0};
};

BlockDiag block_entries(const ModeParams& mp, int n1, int n2) {
    const Mode& m1 = mp.modes[0];
    const Mode& m2 = mp.modes[1];
    const double eta = parity_sign(mp.parity);
    const int N = (n1 + 1) * (n2 + 1);
    BlockDiag bl;
    bl.kd = n2 + 1;
    bl.diag.assign(N, 0.0);
    bl.off1.assign(N, 0.0);
    bl.offk.assign(N, 0.0);
    for (int a = 0; a <= n1; ++a) {
        for (int b = 0; b <= n2; ++b) {
            const int i = a * (n2 + 1) + b;
            const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
            bl.diag[i] = m1.omega * a + m2.omega * b + eta * 0.5 * mp.big_omega * sign;
            if (b + 1 <= n2) bl.off1[i] = m2.g * std::sqrt(double(b + 1));
            if (a + 1 <= n1) bl.offk[i] = m1.g * std::sqrt(double(a + 1));
        }
    }
    return bl;
}

// Lowest eigenvalues via banded symmetric solver (values only), ground vector via
// one shifted banded LU and inverse iteration. Keeps memory at O(N * kd).
std::pair<std::vector<double>, Eigen::VectorXd> solve_block(const ModeParams& mp, int n1, int n2,
                                                            int n_levels) {
    const BlockDiag bl = block_entries(mp, n1, n2);
    const int N = int(bl.diag.size());
    const int kd = bl.kd;
    const int ldab = kd + 1;
    std::vector<double> ab(std::size_t(ldab) * N, 0.0);
    for (int i = 0; i < N; ++i) {
        ab[std::size_t(i) * ldab] = bl.diag[i];
        ab[std::size_t(i) * ldab + 1] = bl.off1[i];
        ab[std::size_t(i) * ldab + kd] = bl.offk[i];
    }
    const int want = std::min(n_levels, N);
    std::vector<double> w(want);
    std::vector<lapack_int> ifail(want);
    lapack_int found = 0;
    lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', N, kd, ab.data(), ldab,
                                     nullptr, N, 0.0, 0.0, 1, want,
                                     2.0 * LAPACKE_dlamch('S'), &found, w.data(), nullptr, N,
                                     ifail.data());
    if (info != 0) throw std::runtime_error("two_mode_ed: LAPACK dsbevx failed");
    w.resize(found);

    // inverse iteration on (A - sigma I) with sigma just below the ground energy
    const double scale = std::max(1.0, std::abs(w.front()));
    const double sigma = w.front() - 1e-6 * scale;
    const int kl = kd, ku = kd;
    const int ldgb = 2 * kl + ku + 1;
    std::vector<double> gb(std::size_t(ldgb) * N, 0.0);
    auto set_gb = [&](int i, int j, double v) {
        gb[std::size_t(j) * ldgb + (kl + ku + i - j)] = v;
    };
    for (int i = 0; i < N; ++i) {
        set_gb(i, i, bl.diag[i] - sigma);
        if (i + 1 < N && bl.off1[i] != 0.0) {
            set_gb(i + 1, i, bl.off1[i]);
            set_gb(i, i + 1, bl.off1[i]);
        }
        if (i + kd < N && bl.offk[i] != 0.0) {
            set_gb(i + kd, i, bl.offk[i]);
            set_gb(i, i + kd, bl.offk[i]);
        }
    }
    std::vector<lapack_int> ipiv(N);
    info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, N, N, kl, ku, gb.data(), ldgb, ipiv.data());
    if (info != 0) throw std::runtime_error("two_mode_ed: banded factorization failed");
    Eigen::VectorXd v = Eigen::VectorXd::Constant(N, 1.0 / std::sqrt(double(N)));
    for (int it = 0; it < 4; ++it) {
        info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', N, kl, ku, 1, gb.data(), ldgb, ipiv.data(),
                              v.data(), N);
        if (info != 0) throw std::runtime_error("two_mode_ed: banded solve failed");
        v.normalize();
    }
    return {w, v};
}

}  // namespace

void ModeParams::validate() const {
    if (modes.empty()) throw std::invalid_argument("ModeParams: at least one mode required");
    for (const Mode& m : modes) {
        if (!(m.omega > 0.0)) throw std::invalid_argument("ModeParams: every omega_k must be > 0");
        if (!(m.g >= 0.0)) throw std::invalid_argument("ModeParams: every g_k must be >= 0");
    }
    if (!(big_omega >= 0.0)) throw std::invalid_argument("ModeParams: big_omega must be >= 0");
}

double multimode_energy(const ModeParams& mp, const MultimodeState& st) {
    mp.validate();
    if (st.modes.size() != mp.modes.size())
        throw std::invalid_argument("multimode_energy: state/mode count mismatch");
    const std::size_t M = mp.modes.size();
    std::vector<ModeTerms> terms(M);
    double prod_ab = 1.0, prod_abr = 1.0, prod_aar = 1.0, prod_bbr = 1.0, e0 = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
        terms[k] = mode_terms(mp.modes[k], st.modes[k]);
        prod_ab *= terms[k].s_ab;
        prod_abr *= terms[k].s_ab_bar;
        prod_aar *= terms[k].s_aa_bar;
        prod_bbr *= terms[k].s_bb_bar;
        e0 += -0.5 * mp.modes[k].omega * (1.0 + terms[k].gp * terms[k].gp);
    }
    const double a = st.alpha, b = st.beta;
    double hsum = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
        // cross term carries the direct overlaps of every other mode
        double others = 1.0;
        for (std::size_t j = 0; j < M; ++j)
            if (j != k) others *= terms[j].s_ab;
        hsum += a * a * terms[k].haa + b * b * terms[k].hbb + 2.0 * a * b * terms[k].hab * others;
    }
    const double npm = a * a * prod_aar + b * b * prod_bbr + 2.0 * a * b * prod_abr;
    return hsum + parity_sign(mp.parity) * 0.5 * mp.big_omega * npm + e0;
}

MultimodeSolution multimode_optimize(const ModeParams& mp, const OptimizerConfig& cfg,
                                     int mode_cap) {
    mp.validate();
    const int M = int(mp.modes.size());
    if (M > mode_cap) throw std::invalid_argument("multimode_optimize: mode count exceeds cap");
    double om_max = 0.0;
    for (const Mode& m : mp.modes) om_max = std::max(om_max, m.omega);
    const double tol_e = cfg.tol_energy > 0.0 ? cfg.tol_energy
                                              : 1e-12 * std::max(mp.big_omega, om_max);

    auto to_state = [&](const std::vector<double>& u) {
        MultimodeState st;
        st.modes.resize(M);
        double prod = 1.0;
        for (int k = 0; k < M; ++k) {
            st.modes[k].xi_a = std::exp(u[4 * k]);
            st.modes[k].xi_b = std::exp(u[4 * k + 1]);
            st.modes[k].zeta_a = u[4 * k + 2];
            st.modes[k].zeta_b = u[4 * k + 3];
            const double gp = std::sqrt(2.0) * mp.modes[k].g / mp.modes[k].omega;
            prod *= overlap_s(st.modes[k].zeta_a, st.modes[k].zeta_b, st.modes[k].xi_a,
                              st.modes[k].xi_b, gp);
        }
        st.alpha = 1.0 / (1.0 + std::exp(-u[4 * M]));
        st.beta = beta_from_alpha(st.alpha, prod);
        return st;
    };
    int evals = 0;
    auto objective = [&](const std::vector<double>& u) {
        ++evals;
        try {
            const double e = multimode_energy(mp, to_state(u));
            return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    auto seed_vec = [&](double zscale_from_gc0, double alpha0, double zfixed) {
        std::vector<double> u(4 * M + 1, 0.0);
        for (int k = 0; k < M; ++k) {
            double z = zfixed;
            if (zscale_from_gc0 > 0.0) {
                const double gc0 = 0.5 * std::sqrt(mp.modes[k].omega * mp.big_omega);
                const double g = mp.modes[k].g;
                z = (g > gc0 && gc0 > 0.0)
                        ? std::sqrt(std::max(1.0 - std::pow(gc0 / g, 4.0), 1e-8))
                        : 0.05;
            }
            u[4 * k + 2] = z;
            u[4 * k + 3] = z;
        }
        const double a = std::clamp(alpha0, 1e-9, 1.0 - 1e-9);
        u[4 * M] = std::log(a / (1.0 - a));
        return u;
    };
    std::vector<std::vector<double>> seeds;
    seeds.push_back(seed_vec(0.0, 0.95, 1.0));
    seeds.push_back(seed_vec(1.0, 0.85, 0.0));
    seeds.push_back(seed_vec(0.0, 0.4, 1.0));
    seeds.push_back(seed_vec(0.0, 0.6, 0.02));
    if (cfg.warm_start) {
        // map a single-mode warm start across all modes
        const VariationalState& w = *cfg.warm_start;
        std::vector<double> u(4 * M + 1, 0.0);
        for (int k = 0; k < M; ++k) {
            u[4 * k] = std::log(w.xi_a);
            u[4 * k + 1] = std::log(w.xi_b);
            u[4 * k + 2] = w.zeta_a;
            u[4 * k + 3] = w.zeta_b;
        }
        const double a = std::clamp(w.alpha, 1e-9, 1.0 - 1e-9);
        u[4 * M] = std::log(a / (1.0 - a));
        seeds.push_back(u);
    }

    NmOptions opt;
    opt.fatol = tol_e;
    opt.xatol = cfg.tol_param;
    opt.max_evals = std::max(cfg.max_evals, 4000 * (4 * M + 1));
    opt.init_step = cfg.init_step;

    NmResult best;
    best.f = std::numeric_limits<double>::infinity();
    int restarts = 0;
    for (const auto& s : seeds) {
        NmResult r = nelder_mead(objective, s, opt);
        for (int k = 0; k < cfg.max_restarts; ++k) {
            NmOptions popt = opt;
            popt.init_step = 0.02;
            NmResult r2 = nelder_mead(objective, r.x, popt);
            ++restarts;
            if (r2.f < r.f - tol_e) {
                r = r2;
            } else {
                if (r2.f < r.f) r = r2;
                break;
            }
        }
        if (r.f < best.f) best = r;
    }

    MultimodeSolution sol;
    sol.state = to_state(best.x);
    sol.energy = best.f;
    sol.converged = best.converged;
    sol.objective_evals = evals;
    sol.restarts_used = restarts;

    // per-mode ground observables; cross terms carry the other modes' direct overlaps
    const double a = sol.state.alpha, b = sol.state.beta;
    std::vector<ModeTerms> terms(M);
    double prod_abr = 1.0, prod_aar = 1.0, prod_bbr = 1.0;
    for (int k = 0; k < M; ++k) {
        terms[k] = mode_terms(mp.modes[k], sol.state.modes[k]);
        prod_abr *= terms[k].s_ab_bar;
        prod_aar *= terms[k].s_aa_bar;
        prod_bbr *= terms[k].s_bb_bar;
    }
    sol.tunneling = parity_sign(mp.parity) *
                    (a * a * prod_aar + b * b * prod_bbr + 2.0 * a * b * prod_abr);
    for (int k = 0; k < M; ++k) {
        double others = 1.0;
        for (int j = 0; j < M; ++j)
            if (j != k) others *= terms[j].s_ab;
        const ModeDeformation& dk = sol.state.modes[k];
        const ModeTerms& t = terms[k];
        ModeObservables mo;
        const double h0pp = a * a * t.h0aa + b * b * t.h0bb + 2.0 * a * b * t.h0ab * others;
        mo.photon_number = std::max(h0pp / mp.modes[k].omega - 0.5, 0.0);
        const double xab = t.x1 - dk.zeta_a * t.gp * t.s;
        mo.coupling_corr = std::sqrt(2.0) * (a * a * (-dk.zeta_a * t.gp) +
                                             b * b * (dk.zeta_b * t.gp) + 2.0 * a * b * xab * others);
        const double p2 = a * a * 0.5 * dk.xi_a + b * b * 0.5 * dk.xi_b +
                          2.0 * a * b * (dk.xi_a * t.s - dk.xi_a * dk.xi_a * t.x2) * others;
        mo.t = 2.0 * p2;
        if (mp.modes[k].g > 0.0) {
            const double inside = mo.photon_number - 0.25 * (mo.t + 1.0 / mo.t) + 0.5;
            mo.gamma = mp.modes[k].omega / (mp.modes[k].g * mo.t) * std::sqrt(std::max(inside, 0.0));
        }
        sol.per_mode.push_back(mo);
    }
    return sol;
}

TwoModeEDSolution two_mode_ed(const ModeParams& mp, const TwoModeEDConfig& cfg) {
    mp.validate();
    if (mp.modes.size() != 2) throw std::invalid_argument("two_mode_ed: exactly two modes required");
    if (!(cfg.tol_convergence > 0.0))
        throw std::invalid_argument("two_mode_ed: tol_convergence must be > 0");
    int n1 = cfg.n1 > 0 ? cfg.n1 : auto_trunc(mp.modes[0]);
    int n2 = cfg.n2 > 0 ? cfg.n2 : auto_trunc(mp.modes[1]);

    auto within_cap = [&](int a, int b) {
        return 2L * (a + 1) * (b + 1) <= cfg.basis_cap;
    };
    if (!within_cap(n1, n2)) throw std::invalid_argument("two_mode_ed: initial truncation exceeds basis cap");

    auto run = [&](int a, int b) { return solve_block(mp, a, b, cfg.n_levels); };
    auto cur = run(n1, n2);
    TwoModeEDSolution out;
    const double scale = std::max({mp.modes[0].omega, mp.modes[1].omega, mp.big_omega,
                                   std::abs(cur.first.front())});
    while (true) {
        if (within_cap(2 * n1, n2)) {
            auto next = run(2 * n1, n2);
            if (std::abs(next.first.front() - cur.first.front()) >= cfg.tol_convergence * scale) {
                n1 *= 2;
                cur = std::move(next);
                continue;
            }
        } else {
            out.converged = false;  // truncation not converged within the cap
            break;
        }
        if (within_cap(n1, 2 * n2)) {
            auto next = run(n1, 2 * n2);
            if (std::abs(next.first.front() - cur.first.front()) >= cfg.tol_convergence * scale) {
                n2 *= 2;
                cur = std::move(next);
                continue;
            }
        } else {
            out.converged = false;
            break;
        }
        out.converged = true;
        break;
    }
    out.energies = cur.first;
    out.ground = cur.second;
    out.n1_used = n1;
    out.n2_used = n2;
    return out;
}

}  // namespace rabi
