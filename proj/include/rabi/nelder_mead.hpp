// nelder_mead.hpp — derivative-free simplex minimizer (adaptive coefficients)
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace rabi {

struct NmOptions {
    double fatol{1e-12};     // simplex f-spread for convergence
    double xatol{1e-8};      // simplex parameter spread for convergence
    int max_evals{20000};
    double init_step{0.2};   // initial simplex edge per coordinate
};

struct NmResult {
    std::vector<double> x;
    double f{0.0};
    int evals{0};
    bool converged{false};
};

inline NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                            const std::vector<double>& x0, const NmOptions& opt) {
    const int n = int(x0.size());
    // Gao-Han adaptive coefficients; reduce to the standard ones at n = 2
    const double ref = 1.0;
    const double exp_ = 1.0 + 2.0 / n;
    const double con = 0.75 - 0.5 / n;
    const double shr = 1.0 - 1.0 / n;

    std::vector<std::vector<double>> sx(n + 1, x0);
    std::vector<double> sf(n + 1);
    for (int i = 1; i <= n; ++i) sx[i][i - 1] += opt.init_step;
    int evals = 0;
    for (int i = 0; i <= n; ++i) sf[i] = (++evals, fn(sx[i]));

    std::vector<int> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return sf[a] < sf[b]; });
    };

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    NmResult res;
    while (true) {
        sort_simplex();
        const int best = order[0], worst = order[n], second = order[n - 1];
        const double fspread = sf[worst] - sf[best];
        double xspread = 0.0;
        for (int i = 0; i <= n; ++i)
            for (int d = 0; d < n; ++d)
                xspread = std::max(xspread, std::abs(sx[i][d] - sx[best][d]));
        if (fspread <= opt.fatol && xspread <= opt.xatol) {
            res.converged = true;
            break;
        }
        if (evals >= opt.max_evals) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (int d = 0; d < n; ++d) centroid[d] += sx[i][d];
        }
        for (int d = 0; d < n; ++d) centroid[d] /= double(n);

        for (int d = 0; d < n; ++d) xr[d] = centroid[d] + ref * (centroid[d] - sx[worst][d]);
        const double fr = (++evals, fn(xr));
        if (fr < sf[best]) {
            for (int d = 0; d < n; ++d) xe[d] = centroid[d] + exp_ * (xr[d] - centroid[d]);
            const double fe = (++evals, fn(xe));
            if (fe < fr) {
                sx[worst] = xe;
                sf[worst] = fe;
            } else {
                sx[worst] = xr;
                sf[worst] = fr;
            }
        } else if (fr < sf[second]) {
            sx[worst] = xr;
            sf[worst] = fr;
        } else {
            const bool outside = fr < sf[worst];
            if (outside)
                for (int d = 0; d < n; ++d) xc[d] = centroid[d] + con * (xr[d] - centroid[d]);
            else
                for (int d = 0; d < n; ++d) xc[d] = centroid[d] - con * (centroid[d] - sx[worst][d]);
            const double fc = (++evals, fn(xc));
            if (fc < std::min(fr, sf[worst])) {
                sx[worst] = xc;
                sf[worst] = fc;
            } else {
                // shrink toward best
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (int d = 0; d < n; ++d)
                        sx[i][d] = sx[best][d] + shr * (sx[i][d] - sx[best][d]);
                    sf[i] = (++evals, fn(sx[i]));
                    if (evals >= opt.max_evals) break;
                }
            }
        }
    }
    sort_simplex();
    res.x = sx[order[0]];
    res.f = sf[order[0]];
    res.evals = evals;
    return res;
}

}  // namespace rabi
