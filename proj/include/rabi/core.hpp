// core.hpp — model parameters, derived coupling scales, region labels
#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

enum class Parity { negative, positive };

inline double parity_sign(Parity p) { return p == Parity::negative ? -1.0 : 1.0; }

// Physical inputs of the single-mode model, one shared energy unit (hbar = m = 1).
struct ModelParams {
    double omega{1.0};        // oscillator frequency, > 0
    double big_omega{1.0};    // level splitting, >= 0 (0 = exact displaced-oscillator limit)
    double g{0.0};            // coupling strength, >= 0
    Parity parity{Parity::negative};

    void validate() const {
        if (!(omega > 0.0)) throw std::invalid_argument("ModelParams: omega must be > 0");
        if (!(big_omega >= 0.0)) throw std::invalid_argument("ModelParams: big_omega must be >= 0");
        if (!(g >= 0.0)) throw std::invalid_argument("ModelParams: g must be >= 0");
    }
};

// Scales computed once per parameter point.
struct DerivedParams {
    double gprime{0.0};   // dimensionless displacement sqrt(2) g / omega
    double e0{0.0};       // constant energy -(omega/2)(gprime^2 + 1)
    double gc0{0.0};      // semiclassical scale sqrt(omega * big_omega) / 2
    double gc{0.0};       // analytic quadpolaron/bipolaron changeover scale
};

DerivedParams derive(const ModelParams& p);

enum class RegionLabel { quadpolaron_normal, quadpolaron_overweighted, bipolaron, crossover };

std::string to_string(RegionLabel r);

}  // namespace rabi
