// overlaps.hpp — closed-form algebra of displaced, frequency-renormalized Gaussian packets
//
// Conventions: a packet with renormalizations (xi, zeta) is the level-n eigenstate of a
// harmonic oscillator with Gaussian parameter xi, centered at -zeta*g' (polaron side) or
// +zeta*g' (antipolaron side) in the dimensionless coordinate x.
#pragma once

#include <cstdint>
#include <vector>

namespace rabi {

enum class PacketSide { polaron, antipolaron };

struct DeformedPacket {
    double xi{1.0};      // frequency renormalization, > 0
    double zeta{0.0};    // displacement renormalization
    PacketSide side{PacketSide::polaron};
    int level{0};        // oscillator quantum number, >= 0

    double center(double gprime) const {
        return side == PacketSide::polaron ? -zeta * gprime : zeta * gprime;
    }
    // normalized wavefunction value at x
    double evaluate(double x, double gprime) const;
    // first and second derivative w.r.t. x (closed form via Hermite recurrences)
    double derivative(double x, double gprime) const;
    double second_derivative(double x, double gprime) const;
};

// Physicists' Hermite polynomial H_n(x), three-term recurrence.
double hermite(int n, double x);

// eps^{m/2} * H_m(y / sqrt(eps)) evaluated as a polynomial in eps; finite and real
// for every real eps (including eps <= 0, where the naive form would need complex
// square roots).
double hermite_scaled(int m, double eps, double y);

// Level-0 overlap S(zeta1, zeta2, xi1, xi2): packets at -zeta1*g' and +zeta2*g'.
double overlap_s(double zeta1, double zeta2, double xi1, double xi2, double gprime);

struct GroundMoments {
    double s{0.0};    // S_{alpha beta}
    double x1{0.0};   // <x_alpha>_{alpha beta},  x_alpha = x + zetaA*g'
    double x2{0.0};   // <x_alpha^2>_{alpha beta}
};

GroundMoments ground_moments(double zetaA, double zetaB, double xiA, double xiB, double gprime);

// Cross-level overlap S~_{k,k'} = <phi_k(xi1; x + zeta1 g') | phi_k'(xi2; x - zeta2 g')>.
double cross_level_overlap(int k, int kp, double zeta1, double zeta2, double xi1, double xi2,
                           double gprime);

// Generalized moment X(n, j) = <phi_n(xiA; x + zetaA g')| (x + zetaA g')^j |phi_n(xiB; x - zetaB g')>.
// Evaluated by expanding x^j phi_n over the xiA oscillator ladder and contracting with
// cross-level overlaps.
double generalized_moment(int n, int j, double zetaA, double zetaB, double xiA, double xiB,
                          double gprime);

// All four level-n tunneling-channel overlaps S_{mu mubar'} (reflected), including the
// (-1)^n parity factor of the reflected packet.
struct OverlapSet {
    double s_ab{0.0};      // S_{alpha beta}        (direct, enters normalization)
    double s_ab_bar{0.0};  // S_{alpha beta-bar}
    double s_aa_bar{0.0};  // S_{alpha alpha-bar}
    double s_bb_bar{0.0};  // S_{beta beta-bar}
};

OverlapSet overlap_set(int n, double zetaA, double zetaB, double xiA, double xiB, double gprime);

}  // namespace rabi
