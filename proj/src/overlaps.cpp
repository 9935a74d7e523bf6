#include "rabi/overlaps.hpp"

#include <cmath>
#include <stdexcept>

namespace rabi {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_positive_xi(double xi) {
    if (!(xi > 0.0)) throw std::invalid_argument("overlaps: xi must be > 0");
}

// exact below 21, log-gamma above (levels used here are small, but the formula
// must not silently overflow)
double factorial(int n) {
    static const double table[21] = {1.,
                                     1.,
                                     2.,
                                     6.,
                                     24.,
                                     120.,
                                     720.,
                                     5040.,
                                     40320.,
                                     362880.,
                                     3628800.,
                                     39916800.,
                                     479001600.,
                                     6227020800.,
                                     87178291200.,
                                     1307674368000.,
                                     20922789888000.,
                                     355687428096000.,
                                     6402373705728000.,
                                     121645100408832000.,
                                     2432902008176640000.};
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    if (n <= 20) return table[n];
    return std::exp(std::lgamma(double(n) + 1.0));
}

// normalized oscillator eigenfunction phi_n(xi; u), stable upward recurrence
double phi_n(int n, double xi, double u) {
    const double p0 = std::pow(xi / kPi, 0.25) * std::exp(-0.5 * xi * u * u);
    if (n == 0) return p0;
    double prev = 0.0, cur = p0;
    for (int m = 0; m < n; ++m) {
        const double next =
            std::sqrt(2.0 * xi / double(m + 1)) * u * cur - std::sqrt(double(m) / double(m + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace

double hermite(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite: n must be >= 0");
    if (n == 0) return 1.0;
    double prev = 1.0, cur = 2.0 * x;
    for (int m = 1; m < n; ++m) {
        const double next = 2.0 * x * cur - 2.0 * double(m) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_scaled(int m, double eps, double y) {
    if (m < 0) throw std::invalid_argument("hermite_scaled: m must be >= 0");
    double tot = 0.0;
    double sign = 1.0;
    for (int i = 0; i <= m / 2; ++i) {
        tot += sign * (factorial(m) / (factorial(i) * factorial(m - 2 * i))) *
               std::pow(2.0 * y, double(m - 2 * i)) * std::pow(eps, double(i));
        sign = -sign;
    }
    return tot;
}

double DeformedPacket::evaluate(double x, double gprime) const {
    require_positive_xi(xi);
    if (level < 0) throw std::invalid_argument("DeformedPacket: level must be >= 0");
    return phi_n(level, xi, x - center(gprime));
}

double DeformedPacket::derivative(double x, double gprime) const {
    // phi_n'(u) = sqrt(2 xi n) phi_{n-1} - xi u phi_n  (ladder identity)
    require_positive_xi(xi);
    const double u = x - center(gprime);
    const double pn = phi_n(level, xi, u);
    const double pm = level > 0 ? phi_n(level - 1, xi, u) : 0.0;
    return std::sqrt(2.0 * xi * double(level)) * pm - xi * u * pn;
}

double DeformedPacket::second_derivative(double x, double gprime) const {
    // from the oscillator equation: phi_n'' = (xi^2 u^2 - (2n+1) xi) phi_n
    require_positive_xi(xi);
    const double u = x - center(gprime);
    const double pn = phi_n(level, xi, u);
    return (xi * xi * u * u - (2.0 * double(level) + 1.0) * xi) * pn;
}

double overlap_s(double zeta1, double zeta2, double xi1, double xi2, double gprime) {
    require_positive_xi(xi1);
    require_positive_xi(xi2);
    const double d = (zeta1 + zeta2) * gprime;
    const double sum = xi1 + xi2;
    const double prod = xi1 * xi2;  // grouped so the (1 <-> 2) swap is exact
    return std::exp(-d * d * prod / (2.0 * sum)) * std::sqrt(2.0) *
           std::pow(prod / (sum * sum), 0.25);
}

GroundMoments ground_moments(double zetaA, double zetaB, double xiA, double xiB, double gprime) {
    GroundMoments m;
    m.s = overlap_s(zetaA, zetaB, xiA, xiB, gprime);
    const double sum = xiA + xiB;
    const double d = (zetaA + zetaB) * gprime;
    m.x1 = m.s * d * xiB / sum;
    m.x2 = m.s / sum * (1.0 + d * d * xiB * xiB / sum);
    return m;
}

double cross_level_overlap(int k, int kp, double zeta1, double zeta2, double xi1, double xi2,
                           double gprime) {
    if (k < 0 || kp < 0) throw std::invalid_argument("cross_level_overlap: levels must be >= 0");
    require_positive_xi(xi1);
    require_positive_xi(xi2);
    const double sum = xi1 + xi2;
    const double a = std::sqrt(2.0 * xi1 / sum);
    const double b = std::sqrt(2.0 * xi2 / sum);
    const double c = (zeta1 + zeta2) * gprime * std::sqrt(sum / 2.0);
    const double abc = a * b * c;
    const double pref = std::sqrt(a * b / (std::pow(2.0, double(k + kp)) * factorial(k) * factorial(kp))) *
                        std::exp(-abc * abc / 4.0) * factorial(k) * factorial(kp);
    const double ea = 1.0 - a * a;  // = -(1 - b^2); negative when xi1 > xi2
    const double eb = 1.0 - b * b;
    double tot = 0.0;
    const int rmax = k < kp ? k : kp;
    for (int r = 0; r <= rmax; ++r) {
        const double coef =
            std::pow(2.0 * a * b, double(r)) / (factorial(k - r) * factorial(kp - r) * factorial(r));
        tot += coef * hermite_scaled(k - r, ea, a * b * b * c / 2.0) *
               hermite_scaled(kp - r, eb, -a * a * b * c / 2.0);
    }
    const double val = pref * tot;
    if (!std::isfinite(val)) throw std::runtime_error("cross_level_overlap: nonfinite result");
    return val;
}

double generalized_moment(int n, int j, double zetaA, double zetaB, double xiA, double xiB,
                          double gprime) {
    if (n < 0 || j < 0) throw std::invalid_argument("generalized_moment: n, j must be >= 0");
    require_positive_xi(xiA);
    require_positive_xi(xiB);
    // coefficients of x_alpha^j phi_n over the xiA oscillator basis: j applications
    // of the tridiagonal position operator, x_{m,m+1} = sqrt((m+1)/(2 xiA))
    const int size = n + j + 1;
    std::vector<double> v(size, 0.0), w(size, 0.0);
    v[n] = 1.0;
    for (int rep = 0; rep < j; ++rep) {
        std::fill(w.begin(), w.end(), 0.0);
        for (int m = 0; m < size; ++m) {
            if (v[m] == 0.0) continue;
            if (m + 1 < size) w[m + 1] += v[m] * std::sqrt(double(m + 1) / (2.0 * xiA));
            if (m >= 1) w[m - 1] += v[m] * std::sqrt(double(m) / (2.0 * xiA));
        }
        std::swap(v, w);
    }
    double tot = 0.0;
    for (int m = 0; m < size; ++m) {
        if (v[m] == 0.0) continue;
        tot += v[m] * cross_level_overlap(m, n, zetaA, zetaB, xiA, xiB, gprime);
    }
    if (!std::isfinite(tot)) throw std::runtime_error("generalized_moment: nonfinite result");
    return tot;
}

OverlapSet overlap_set(int n, double zetaA, double zetaB, double xiA, double xiB, double gprime) {
    OverlapSet s;
    const double parity_n = (n % 2 == 0) ? 1.0 : -1.0;
    if (n == 0) {
        s.s_ab = overlap_s(zetaA, zetaB, xiA, xiB, gprime);
        s.s_ab_bar = overlap_s(zetaA, -zetaB, xiA, xiB, gprime);
        s.s_aa_bar = overlap_s(zetaA, zetaA, xiA, xiA, gprime);
        s.s_bb_bar = overlap_s(zetaB, zetaB, xiB, xiB, gprime);
        return s;
    }
    s.s_ab = cross_level_overlap(n, n, zetaA, zetaB, xiA, xiB, gprime);
    s.s_ab_bar = parity_n * cross_level_overlap(n, n, zetaA, -zetaB, xiA, xiB, gprime);
    s.s_aa_bar = parity_n * cross_level_overlap(n, n, zetaA, zetaA, xiA, xiA, gprime);
    s.s_bb_bar = parity_n * cross_level_overlap(n, n, zetaB, zetaB, xiB, xiB, gprime);
    return s;
}

}  // namespace rabi
