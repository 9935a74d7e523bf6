#include "rabi/core.hpp"

#include <cmath>

namespace rabi {

DerivedParams derive(const ModelParams& p) {
    p.validate();
    DerivedParams d;
    d.gprime = std::sqrt(2.0) * p.g / p.omega;
    d.e0 = -0.5 * p.omega * (d.gprime * d.gprime + 1.0);
    d.gc0 = 0.5 * std::sqrt(p.omega * p.big_omega);
    const double w2 = p.omega * p.omega;
    const double gc04 = d.gc0 * d.gc0 * d.gc0 * d.gc0;
    d.gc = std::sqrt(w2 + std::sqrt(w2 * w2 + gc04));
    return d;
}

std::string to_string(RegionLabel r) {
    switch (r) {
        case RegionLabel::quadpolaron_normal: return "quadpolaron_normal";
        case RegionLabel::quadpolaron_overweighted: return "quadpolaron_overweighted";
        case RegionLabel::bipolaron: return "bipolaron";
        case RegionLabel::crossover: return "crossover";
    }
    return "unknown";
}

}  // namespace rabi
