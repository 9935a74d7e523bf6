#include "rabi/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rabi/nelder_mead.hpp"

namespace rabi {

namespace {

struct Elements {
    double haa, hbb, hab;  // single-well matrix elements of h^+
    double npm;            // <psi_+|psi_->
    double s_ab;           // direct overlap entering the normalization
};

Elements level_elements(const ModelParams& p, const VariationalState& s, int n, bool generalized) {
    const DerivedParams d = derive(p);
    const double gp = d.gprime;
    const double om = p.omega;
    Elements e{};
    double x0, x1, x2;
    OverlapSet ov;
    if (n == 0 && !generalized) {
        const GroundMoments m = ground_moments(s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
        x0 = m.s;
        x1 = m.x1;
        x2 = m.x2;
        ov = overlap_set(0, s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
    } else {
        x0 = generalized_moment(n, 0, s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
        x1 = generalized_moment(n, 1, s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
        x2 = generalized_moment(n, 2, s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
        ov = overlap_set(n, s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
    }
    const double nn = double(n) + 0.5;
    const double ca = 1.0 - s.zeta_a;
    const double cb = 1.0 + s.zeta_b;  // antipolaron sits at +zeta_b g' in the (x + g')^2 well
    e.haa = 0.5 * om * (nn * (s.xi_a + 1.0 / s.xi_a) + ca * ca * gp * gp);
    e.hbb = 0.5 * om * (nn * (s.xi_b + 1.0 / s.xi_b) + cb * cb * gp * gp);
    e.hab = 0.5 * om *
            ((1.0 - s.xi_a * s.xi_a) * x2 + 2.0 * ca * gp * x1 +
             (2.0 * double(n) + 1.0) * s.xi_a * x0 + ca * ca * gp * gp * x0);
    e.npm = s.alpha * s.alpha * ov.s_aa_bar + s.beta * s.beta * ov.s_bb_bar +
            2.0 * s.alpha * s.beta * ov.s_ab_bar;
    e.s_ab = x0;
    return e;
}

double energy_impl(const ModelParams& p, const VariationalState& s, int n, bool generalized) {
    if (n < 0) throw std::invalid_argument("energy: level must be >= 0");
    const DerivedParams d = derive(p);
    const Elements e = level_elements(p, s, n, generalized);
    const double hpp = s.alpha * s.alpha * e.haa + s.beta * s.beta * e.hbb +
                       2.0 * s.alpha * s.beta * e.hab;
    return hpp + parity_sign(p.parity) * 0.5 * p.big_omega * e.npm + d.e0;
}

// transformed coordinates: (log xi_a, log xi_b, zeta_a, zeta_b, logit alpha)
VariationalState unpack_full(const ModelParams& p, const std::vector<double>& u, int n) {
    VariationalState s;
    s.xi_a = std::exp(u[0]);
    s.xi_b = std::exp(u[1]);
    s.zeta_a = u[2];
    s.zeta_b = u[3];
    s.alpha = 1.0 / (1.0 + std::exp(-u[4]));
    const double gp = derive(p).gprime;
    const double s_ab = (n == 0) ? overlap_s(s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp)
                                 : cross_level_overlap(n, n, s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
    s.beta = beta_from_alpha(s.alpha, s_ab);
    return s;
}

std::vector<double> pack_full(const VariationalState& s) {
    const double a = std::clamp(s.alpha, 1e-12, 1.0 - 1e-12);
    return {std::log(s.xi_a), std::log(s.xi_b), s.zeta_a, s.zeta_b, std::log(a / (1.0 - a))};
}

double logit(double a) { return std::log(std::clamp(a, 1e-12, 1.0 - 1e-12) / (1.0 - std::clamp(a, 1e-12, 1.0 - 1e-12))); }

// Deterministic multi-start schedule. The Xi-noSqueez seed exists above gc0 only;
// the delocalized seed keeps the constrained variants honest below the changeover
// (every other seed is localized).
std::vector<VariationalState> seed_schedule(const ModelParams& p,
                                            const std::optional<VariationalState>& warm) {
    const DerivedParams d = derive(p);
    std::vector<VariationalState> seeds;
    seeds.push_back({1.0, 1.0, 1.0, 1.0, 0.95, 0.0});  // polaron-dominated
    if (p.g > d.gc0 && d.gc0 > 0.0) {
        const double r = d.gc0 / p.g;
        const double z = std::sqrt(std::max(1.0 - r * r * r * r, 1e-8));
        const double a = std::min(std::sqrt((1.0 + z) / 2.0), 1.0 - 1e-9);
        seeds.push_back({1.0, 1.0, z, z, a, 0.0});  // symmetric-collapse seed
    }
    if (warm) seeds.push_back(*warm);
    seeds.push_back({1.0, 1.0, 1.0, 1.0, 0.4, 0.0});    // antipolaron-heavy
    seeds.push_back({1.0, 1.0, 0.02, 0.02, 0.6, 0.0});  // delocalized
    return seeds;
}

struct StartResult {
    NmResult nm;
    VariationalState state;
};

VariationalSolution run_multistart(const ModelParams& p, const OptimizerConfig& cfg, int n,
                                   ConstraintSet constraints, bool generalized) {
    p.validate();
    const double tol_e = cfg.tol_energy > 0.0 ? cfg.tol_energy
                                              : 1e-12 * std::max(p.big_omega, p.omega);
    NmOptions opt;
    opt.fatol = tol_e;
    opt.xatol = cfg.tol_param;
    opt.max_evals = cfg.max_evals;
    opt.init_step = cfg.init_step;

    // reduced coordinates per constraint set
    auto to_state = [&](const std::vector<double>& u) {
        std::vector<double> full;
        switch (constraints) {
            case ConstraintSet::full: full = u; break;
            case ConstraintSet::no_squeeze: full = {0.0, 0.0, u[0], u[1], u[2]}; break;
            case ConstraintSet::symmetric: full = {u[0], u[0], u[1], u[1], u[2]}; break;
        }
        return unpack_full(p, full, n);
    };
    auto to_reduced = [&](const VariationalState& s) -> std::vector<double> {
        switch (constraints) {
            case ConstraintSet::no_squeeze: return {s.zeta_a, s.zeta_b, logit(s.alpha)};
            case ConstraintSet::symmetric:
                return {std::log(std::sqrt(s.xi_a * s.xi_b)), 0.5 * (s.zeta_a + s.zeta_b),
                        logit(s.alpha)};
            case ConstraintSet::full: break;
        }
        return pack_full(s);
    };

    int evals = 0;
    auto objective = [&](const std::vector<double>& u) {
        ++evals;
        // a wandering simplex may hit overflow territory; steer it back
        try {
            const double e = energy_impl(p, to_state(u), n, generalized);
            return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    std::vector<StartResult> results;
    int restarts = 0;
    for (const auto& seed : seed_schedule(p, cfg.warm_start)) {
        NmResult r = nelder_mead(objective, to_reduced(seed), opt);
        // polish: restart the simplex around the incumbent until no improvement
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
        results.push_back({r, to_state(r.x)});
    }

    // best energy; ties (within 100 x tol) broken toward the larger polaron weight
    double fbest = results.front().nm.f;
    for (const auto& sr : results) fbest = std::min(fbest, sr.nm.f);
    const StartResult* pick = nullptr;
    for (const auto& sr : results) {
        if (sr.nm.f > fbest + 100.0 * tol_e) continue;
        if (!pick || sr.state.alpha > pick->state.alpha) pick = &sr;
    }

    VariationalSolution sol;
    sol.state = pick->state;
    sol.converged = pick->nm.converged;
    sol.objective_evals = evals;
    sol.restarts_used = restarts;
    sol.level = n;
    if (p.g == 0.0) {
        // g' = 0 makes the displacements pure gauge; report them canonically
        sol.state.zeta_a = 0.0;
        sol.state.zeta_b = 0.0;
    }
    sol.observables = observables(p, sol.state);
    sol.observables.energy = energy_impl(p, sol.state, n, generalized);
    return sol;
}

}  // namespace

double beta_from_alpha(double alpha, double s_ab) {
    if (std::abs(s_ab) > 1.0 + 1e-12)
        throw std::invalid_argument("beta_from_alpha: |s_ab| must be <= 1");
    const double disc = alpha * alpha * s_ab * s_ab - alpha * alpha + 1.0;
    if (disc < 0.0) {
        if (disc < -1e-12) throw std::runtime_error("beta_from_alpha: negative discriminant");
        return -alpha * s_ab;  // FP noise at |s_ab| = 1, alpha = 1
    }
    return -alpha * s_ab + std::sqrt(disc);
}

double energy(const ModelParams& p, const VariationalState& s, int n) {
    return energy_impl(p, s, n, false);
}

double energy_generalized(const ModelParams& p, const VariationalState& s, int n) {
    return energy_impl(p, s, n, true);
}

Observables observables(const ModelParams& p, const VariationalState& s) {
    p.validate();
    const DerivedParams d = derive(p);
    const double gp = d.gprime;
    const double om = p.omega;
    const GroundMoments m = ground_moments(s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
    const OverlapSet ov = overlap_set(0, s.zeta_a, s.zeta_b, s.xi_a, s.xi_b, gp);
    const double a = s.alpha, b = s.beta;

    Observables o;
    o.energy = energy(p, s, 0);

    const double h0aa = 0.5 * om * (0.5 * (s.xi_a + 1.0 / s.xi_a) + s.zeta_a * s.zeta_a * gp * gp);
    const double h0bb = 0.5 * om * (0.5 * (s.xi_b + 1.0 / s.xi_b) + s.zeta_b * s.zeta_b * gp * gp);
    const double h0ab = 0.5 * om *
                        ((1.0 - s.xi_a * s.xi_a) * m.x2 - 2.0 * s.zeta_a * gp * m.x1 +
                         s.xi_a * m.s + s.zeta_a * s.zeta_a * gp * gp * m.s);
    const double h0pp = a * a * h0aa + b * b * h0bb + 2.0 * a * b * h0ab;
    o.photon_number = std::max(h0pp / om - 0.5, 0.0);

    const double xaa = -s.zeta_a * gp;
    const double xbb = s.zeta_b * gp;
    const double xab = m.x1 - s.zeta_a * gp * m.s;
    o.coupling_corr = std::sqrt(2.0) * (a * a * xaa + b * b * xbb + 2.0 * a * b * xab);

    const double p2aa = 0.5 * s.xi_a;
    const double p2bb = 0.5 * s.xi_b;
    const double p2ab = s.xi_a * m.s - s.xi_a * s.xi_a * m.x2;
    o.t = 2.0 * (a * a * p2aa + b * b * p2bb + 2.0 * a * b * p2ab);

    const double npm = a * a * ov.s_aa_bar + b * b * ov.s_bb_bar + 2.0 * a * b * ov.s_ab_bar;
    o.tunneling = parity_sign(p.parity) * npm;

    o.channels.aa = a * a * ov.s_aa_bar;
    o.channels.bb = b * b * ov.s_bb_bar;
    o.channels.ab = a * b * ov.s_ab_bar;
    o.channels.ba = o.channels.ab;  // S_{beta alphabar} = S_{alpha betabar} at equal levels

    if (p.g > 0.0) {
        const double inside = o.photon_number - 0.25 * (o.t + 1.0 / o.t) + 0.5;
        o.gamma = p.omega / (p.g * o.t) * std::sqrt(std::max(inside, 0.0));
    }
    return o;
}

VariationalSolution optimize_ground(const ModelParams& p, const OptimizerConfig& cfg) {
    return run_multistart(p, cfg, 0, ConstraintSet::full, false);
}

VariationalSolution optimize_constrained(const ModelParams& p, ConstraintSet constraints,
                                         const OptimizerConfig& cfg) {
    return run_multistart(p, cfg, 0, constraints, false);
}

double aa_grwa_ground(const ModelParams& p) {
    p.validate();
    const double r = p.g / p.omega;
    return -p.g * p.g / p.omega - 0.5 * p.big_omega * std::exp(-2.0 * r * r);
}

std::vector<double> aa_grwa_levels(const ModelParams& p, int count) {
    p.validate();
    if (count < 1) throw std::invalid_argument("aa_grwa_levels: count must be >= 1");
    const double lam = 4.0 * p.g * p.g / (p.omega * p.omega);
    // Laguerre L_n(lam) by three-term recurrence
    std::vector<double> lag(count);
    lag[0] = 1.0;
    if (count > 1) lag[1] = 1.0 - lam;
    for (int k = 2; k < count; ++k)
        lag[k] = ((2.0 * k - 1.0 - lam) * lag[k - 1] - double(k - 1) * lag[k - 2]) / double(k);
    std::vector<double> levels;
    for (int n = 0; n < count; ++n) {
        const double split = 0.5 * p.big_omega * std::exp(-lam / 2.0) * lag[n];
        const double base = double(n) * p.omega - p.g * p.g / p.omega;
        levels.push_back(base - split);
        levels.push_back(base + split);
    }
    std::sort(levels.begin(), levels.end());
    levels.resize(count);
    return levels;
}

VariationalSolution excited_energy(const ModelParams& p, int n, const OptimizerConfig& cfg) {
    if (n < 0) throw std::invalid_argument("excited_energy: level must be >= 0");
    // The level-n member of the tower anchored at params.parity has physical parity
    // parity * (-1)^n; that sign is what multiplies the tunneling term.
    ModelParams q = p;
    const double eta_phys = parity_sign(p.parity) * ((n % 2 == 0) ? 1.0 : -1.0);
    q.parity = eta_phys < 0 ? Parity::negative : Parity::positive;
    VariationalSolution sol = run_multistart(q, cfg, n, ConstraintSet::full, true);
    sol.physical_parity = q.parity;
    sol.observables = Observables{};  // ground-state observable formulas do not apply
    sol.observables.energy = energy_generalized(q, sol.state, n);
    return sol;
}

std::vector<VariationalSolution> variational_levels(const ModelParams& p, int count,
                                                    const OptimizerConfig& cfg) {
    std::vector<VariationalSolution> all;
    for (int n = 0; n < count; ++n) {
        for (Parity br : {Parity::negative, Parity::positive}) {
            ModelParams q = p;
            q.parity = br;
            all.push_back(excited_energy(q, n, cfg));
        }
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.observables.energy < b.observables.energy;
    });
    if (int(all.size()) > count) all.resize(count);
    return all;
}

WavefunctionSample wavefunction_eval(const VariationalState& s, const ModelParams& p,
                                     const std::vector<double>& x_grid, int level) {
    p.validate();
    const double gp = derive(p).gprime;
    const DeformedPacket pa{s.xi_a, s.zeta_a, PacketSide::polaron, level};
    const DeformedPacket pb{s.xi_b, s.zeta_b, PacketSide::antipolaron, level};
    WavefunctionSample w;
    w.x = x_grid;
    w.psi_up.reserve(x_grid.size());
    w.psi_down.reserve(x_grid.size());
    const double eta = parity_sign(p.parity);
    for (double x : x_grid)
        w.psi_up.push_back(s.alpha * pa.evaluate(x, gp) + s.beta * pb.evaluate(x, gp));
    for (double x : x_grid)
        w.psi_down.push_back(eta * (s.alpha * pa.evaluate(-x, gp) + s.beta * pb.evaluate(-x, gp)));
    return w;
}

}  // namespace rabi
