// quadrature.hpp — independent adaptive-quadrature oracle for overlap integrals.
// Lives in the test suite on purpose: the runtime kernels stay closed-form.
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

#include "rabi/overlaps.hpp"

namespace rabi::test {

inline double integrate(const std::function<double(double)>& f, double lo, double hi) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14,
                                                                         &error);
}

// integral of  packet1(x) * (x + shift)^j * packet2(x)
inline double packet_moment(const DeformedPacket& p1, const DeformedPacket& p2, int j,
                            double shift, double gprime) {
    const double c1 = p1.center(gprime);
    const double c2 = p2.center(gprime);
    const double width = 14.0 / std::sqrt(std::min(p1.xi, p2.xi)) + 1.0;
    const double lo = std::min(c1, c2) - width;
    const double hi = std::max(c1, c2) + width;
    return integrate(
        [&](double x) {
            return p1.evaluate(x, gprime) * std::pow(x + shift, double(j)) *
                   p2.evaluate(x, gprime);
        },
        lo, hi);
}

// <phi_k(xi1; x + z1 g') | (x + z1 g')^j | phi_kp(xi2; x - z2 g')>, the defining
// integral behind overlap_s / ground_moments / cross_level_overlap / generalized_moment
inline double overlap_oracle(int k, int kp, double z1, double z2, double xi1, double xi2,
                             double gprime, int j = 0) {
    const DeformedPacket p1{xi1, z1, PacketSide::polaron, k};
    const DeformedPacket p2{xi2, z2, PacketSide::antipolaron, kp};
    return packet_moment(p1, p2, j, z1 * gprime, gprime);
}

}  // namespace rabi::test
