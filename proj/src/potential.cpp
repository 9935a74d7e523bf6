#include "rabi/potential.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rabi {

namespace {

double psi_plus(const VariationalState& s, double gp, double x) {
    const DeformedPacket pa{s.xi_a, s.zeta_a, PacketSide::polaron, 0};
    const DeformedPacket pb{s.xi_b, s.zeta_b, PacketSide::antipolaron, 0};
    return s.alpha * pa.evaluate(x, gp) + s.beta * pb.evaluate(x, gp);
}

double psi_plus_d1(const VariationalState& s, double gp, double x) {
    const DeformedPacket pa{s.xi_a, s.zeta_a, PacketSide::polaron, 0};
    const DeformedPacket pb{s.xi_b, s.zeta_b, PacketSide::antipolaron, 0};
    return s.alpha * pa.derivative(x, gp) + s.beta * pb.derivative(x, gp);
}

double psi_plus_d2(const VariationalState& s, double gp, double x) {
    const DeformedPacket pa{s.xi_a, s.zeta_a, PacketSide::polaron, 0};
    const DeformedPacket pb{s.xi_b, s.zeta_b, PacketSide::antipolaron, 0};
    return s.alpha * pa.second_derivative(x, gp) + s.beta * pb.second_derivative(x, gp);
}

void check_separated(const VariationalState& s, double gp) {
    const double dist = (s.zeta_a + s.zeta_b) * gp;
    const double radii = 2.0 / std::sqrt(s.xi_a) + 2.0 / std::sqrt(s.xi_b);
    if (dist < radii) throw std::runtime_error("well_expansion: wells not separated");
}

}  // namespace

PotentialProfile potential_profile(const VariationalState& state, const ModelParams& params,
                                   const std::vector<double>& grid, Spin spin) {
    params.validate();
    const DerivedParams d = derive(params);
    const double gp = d.gprime;
    const double eta = parity_sign(params.parity);
    PotentialProfile prof;
    prof.spin = spin;
    prof.x = grid;
    const double sgn = spin == Spin::up ? 1.0 : -1.0;  // v_+- = (x +- g')^2

    std::vector<double> same(grid.size()), opp(grid.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        // psi_- (x) = psi_+(-x)
        const double pu = psi_plus(state, gp, x);
        const double pd = psi_plus(state, gp, -x);
        same[i] = spin == Spin::up ? pu : pd;
        opp[i] = spin == Spin::up ? pd : pu;
        prof.psi_up.push_back(pu);
        prof.psi_down.push_back(eta * pd);
        peak = std::max(peak, std::abs(same[i]));
    }
    const double floor = 1e-12 * peak;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double vb = (x + sgn * gp) * (x + sgn * gp);
        prof.v_bare.push_back(vb);
        if (std::abs(same[i]) < floor || params.big_omega == 0.0) {
            const bool ok = params.big_omega == 0.0;  // delta v is identically zero then
            prof.defined.push_back(ok);
            const double dv = ok ? 0.0 : std::numeric_limits<double>::quiet_NaN();
            prof.v_delta.push_back(dv);
            prof.v_total.push_back(vb + dv);
        } else {
            const double dv = eta * (params.big_omega / params.omega) * opp[i] / same[i];
            prof.defined.push_back(true);
            prof.v_delta.push_back(dv);
            prof.v_total.push_back(vb + dv);
        }
    }
    return prof;
}

WellExpansion well_expansion(const VariationalState& state, const ModelParams& params,
                             PacketSide well) {
    params.validate();
    const DerivedParams d = derive(params);
    const double gp = d.gprime;
    check_separated(state, gp);
    const double eta = parity_sign(params.parity);

    WellExpansion w;
    w.x_min = well == PacketSide::polaron ? -state.zeta_a * gp : state.zeta_b * gp;
    w.epsilon = well == PacketSide::polaron ? state.xi_a : state.xi_b;

    const double x = w.x_min;
    // delta v = eta (Omega/omega) q(x), q = psi_-(x)/psi_+(x) with psi_-(x) = psi_+(-x)
    const double p = psi_plus(state, gp, x);
    const double p1 = psi_plus_d1(state, gp, x);
    const double p2 = psi_plus_d2(state, gp, x);
    const double m = psi_plus(state, gp, -x);
    const double m1 = -psi_plus_d1(state, gp, -x);   // d/dx psi_+(-x)
    const double m2 = psi_plus_d2(state, gp, -x);
    if (p == 0.0) throw std::runtime_error("well_expansion: wavefunction node at well minimum");
    const double q = m / p;
    const double q1 = (m1 * p - m * p1) / (p * p);
    const double q2 = (m2 * p - m * p2) / (p * p) - 2.0 * p1 * q1 / p;
    const double pref = eta * params.big_omega / params.omega;
    w.f1 = 2.0 * (x + gp) + pref * q1;
    w.f2 = 1.0 + 0.5 * pref * q2;
    return w;
}

SelfConsistentSolution self_consistent_solve(const ModelParams& params,
                                             const SelfConsistentConfig& cfg) {
    params.validate();
    const DerivedParams d = derive(params);
    const double gp = d.gprime;

    SelfConsistentSolution out;
    if (params.big_omega == 0.0) {
        // no tunneling: pure-polaron fixed point, beta = 0 branch rejected
        out.state = {1.0, 1.0, 1.0, 1.0, 1.0, 0.0};
        out.converged = true;
        return out;
    }
    if (params.g <= d.gc)
        throw std::runtime_error("self_consistent_solve: requires the strong-coupling domain g > g_c");

    // unknowns u = (zeta_a, zeta_b, log xi_a, log xi_b, logit alpha)
    const double ratio = d.gc0 / params.g;
    const double z0 = std::sqrt(std::max(1.0 - std::pow(ratio, 4.0), 1e-8));
    const double a0 = std::min(std::sqrt((1.0 + z0) / 2.0), 1.0 - 1e-9);
    Eigen::VectorXd u(5);
    u << z0, z0, 0.0, 0.0, std::log(a0 / (1.0 - a0));

    const double om_ratio = params.big_omega / params.omega;
    auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        const double za = v(0), zb = v(1);
        const double xa = std::exp(v(2)), xb = std::exp(v(3));
        const double al = 1.0 / (1.0 + std::exp(-v(4)));
        const double be = std::sqrt(std::max(1.0 - al * al, 1e-300));
        // strong-coupling delta v near each well keeps only the opposite packet:
        //   near x_a = -za g':  dv(x) = -(Omega/omega) (beta/alpha) phi_b(-x)/phi_a(x)
        //   near x_b = +zb g':  dv(x) = -(Omega/omega) (alpha/beta) phi_a(-x)/phi_b(x)
        // both reduce to K exp(E(x)) with quadratic E, so derivatives are closed-form.
        const double xA = -za * gp;
        const double eA = -0.5 * xb * (xA + zb * gp) * (xA + zb * gp);
        const double dva = -om_ratio * (be / al) * std::pow(xb / xa, 0.25) * std::exp(eA);
        const double eA1 = -xb * (xA + zb * gp);
        const double f1a = 2.0 * (xA + gp) + dva * eA1;
        const double f2a = 1.0 + 0.5 * dva * (eA1 * eA1 + (xa - xb));

        const double xB = zb * gp;
        const double eB = -0.5 * xa * (xB - za * gp) * (xB - za * gp);
        const double dvb = -om_ratio * (al / be) * std::pow(xa / xb, 0.25) * std::exp(eB);
        const double eB1 = -xa * (xB - za * gp);
        const double f1b = 2.0 * (xB + gp) + dvb * eB1;
        const double f2b = 1.0 + 0.5 * dvb * (eB1 * eB1 + (xb - xa));

        const double lvlA = (xA + gp) * (xA + gp) + dva + xa;
        const double lvlB = (xB + gp) * (xB + gp) + dvb + xb;

        Eigen::VectorXd r(5);
        r << f1a, f1b, f2a - xa * xa, f2b - xb * xb, lvlA - lvlB;
        return r;
    };

    Eigen::VectorXd r = residual(u);
    const double scale = std::max(1.0, gp * gp);
    for (out.iterations = 0; out.iterations < cfg.max_iter; ++out.iterations) {
        out.residual = r.cwiseAbs().maxCoeff();
        if (out.residual < cfg.tol_residual * scale) {
            out.converged = true;
            break;
        }
        Eigen::MatrixXd J(5, 5);
        for (int j = 0; j < 5; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(u(j)));
            Eigen::VectorXd up = u;
            up(j) += h;
            J.col(j) = (residual(up) - r) / h;
        }
        const Eigen::VectorXd du = J.partialPivLu().solve(r);
        if (!du.allFinite()) break;
        u -= cfg.damping * du;
        // iterates must stay in the separated-well domain
        const double dist = (u(0) + u(1)) * gp;
        const double radii = 2.0 / std::exp(0.5 * u(2)) + 2.0 / std::exp(0.5 * u(3));
        if (dist < radii)
            throw std::runtime_error("self_consistent_solve: left g<g_c domain (wells merged)");
        r = residual(u);
    }

    out.state.zeta_a = u(0);
    out.state.zeta_b = u(1);
    out.state.xi_a = std::exp(u(2));
    out.state.xi_b = std::exp(u(3));
    out.state.alpha = 1.0 / (1.0 + std::exp(-u(4)));
    const double s_ab = overlap_s(out.state.zeta_a, out.state.zeta_b, out.state.xi_a,
                                  out.state.xi_b, gp);
    out.state.beta = beta_from_alpha(out.state.alpha, s_ab);
    return out;
}

}  // namespace rabi
