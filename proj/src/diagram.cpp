#include "rabi/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rabi/parallel.hpp"

namespace rabi {

namespace {

DiagramCell make_cell(const ModelParams& p, const SweepConfig& cfg,
                      const std::optional<VariationalState>& warm) {
    OptimizerConfig oc = cfg.opt;
    oc.warm_start = warm;
    const DerivedParams d = derive(p);
    VariationalSolution sol = optimize_ground(p, oc);
    DiagramCell cell;
    cell.omega = p.omega;
    cell.big_omega = p.big_omega;
    cell.g = p.g;
    cell.g_over_gc = d.gc > 0.0 ? p.g / d.gc : 0.0;
    cell.state = sol.state;
    cell.observables = sol.observables;
    cell.converged = sol.converged;
    cell.region = classify(sol.state, sol.observables, d, p, cfg);
    if (cfg.with_ed) {
        EDSolution ed = ed_solve(p, cfg.ed);
        cell.ed = ed_observables(ed, p);
    }
    return cell;
}

// natural cubic spline through (xs, ys); assumes xs strictly ascending
struct CubicSpline {
    std::vector<double> x, y, m;  // second derivatives

    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : x(std::move(xs)), y(std::move(ys)) {
        const int n = int(x.size());
        m.assign(n, 0.0);
        if (n < 3) return;
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), r(n, 0.0);
        for (int i = 1; i + 1 < n; ++i) {
            const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            r[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        }
        for (int i = 1; i < n; ++i) {  // Thomas algorithm
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m[n - 1] = r[n - 1] / b[n - 1];
        for (int i = n - 2; i >= 0; --i) m[i] = (r[i] - c[i] * m[i + 1]) / b[i];
    }

    double operator()(double xq) const {
        const int n = int(x.size());
        int i = int(std::upper_bound(x.begin(), x.end(), xq) - x.begin()) - 1;
        i = std::clamp(i, 0, n - 2);
        const double h = x[i + 1] - x[i];
        const double t = (xq - x[i]) / h;
        const double u = 1.0 - t;
        return u * y[i] + t * y[i + 1] +
               h * h / 6.0 * ((u * u * u - u) * m[i] + (t * t * t - t) * m[i + 1]);
    }
};

double golden_section_min(const CubicSpline& f, double lo, double hi, double tol) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> g_grid_for(double gc, const BoundarySearchConfig& cfg) {
    std::vector<double> gs(cfg.grid_points);
    for (int i = 0; i < cfg.grid_points; ++i)
        gs[i] = gc * (cfg.g_over_gc_min +
                      (cfg.g_over_gc_max - cfg.g_over_gc_min) * double(i) /
                          double(cfg.grid_points - 1));
    return gs;
}

// interior extremum of a sweep-interpolated quantity; sign=+1 minimum, -1 maximum
double interior_extremum(double omega_ratio, double big_omega, const BoundarySearchConfig& cfg,
                         double sign, bool use_gamma) {
    ModelParams p;
    // at Omega = 0 the ratio degenerates; read it as an absolute frequency
    p.omega = big_omega > 0.0 ? omega_ratio * big_omega : omega_ratio;
    p.big_omega = big_omega;
    const DerivedParams d = derive(p);
    const std::vector<double> gs = g_grid_for(d.gc, cfg);
    SweepConfig sc = cfg.sweep;
    sc.with_ed = false;
    const std::vector<DiagramCell> cells = sweep_g(p, gs, sc);
    std::vector<double> ys;
    ys.reserve(cells.size());
    for (const auto& c : cells) {
        double v;
        if (use_gamma)
            v = c.observables.gamma ? *c.observables.gamma : 0.0;
        else
            v = 0.5 * (c.state.xi_a + c.state.xi_b);
        ys.push_back(sign * v);
    }
    int best = 0;
    for (int i = 1; i < int(ys.size()); ++i)
        if (ys[i] < ys[best]) best = i;
    if (best == 0 || best + 1 == int(ys.size()))
        throw std::runtime_error("no interior minimum");
    CubicSpline spline(gs, ys);
    const double tol_scale = big_omega > 0.0 ? big_omega : p.omega;
    return golden_section_min(spline, gs[best - 1], gs[best + 1], cfg.tol_g * tol_scale);
}

}  // namespace

std::string to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::gc_analytic: return "gc_analytic";
        case BoundaryKind::xi_minimum: return "xi_minimum";
        case BoundaryKind::weight_crossing_lower: return "weight_crossing_lower";
        case BoundaryKind::weight_crossing_upper: return "weight_crossing_upper";
    }
    return "unknown";
}

RegionLabel classify(const VariationalState& state, const Observables& obs,
                     const DerivedParams& derived, const ModelParams& params,
                     const SweepConfig& cfg) {
    if (params.big_omega == 0.0) return RegionLabel::bipolaron;  // tunneling absent, channels dead
    if (params.g == 0.0) return RegionLabel::quadpolaron_normal;
    if (std::abs(params.g - derived.gc) <= cfg.crossover_band * derived.gc)
        return RegionLabel::crossover;
    const bool left_right_dead = std::abs(obs.channels.aa) < cfg.channel_floor &&
                                 std::abs(obs.channels.bb) < cfg.channel_floor;
    if (params.g > derived.gc && left_right_dead) return RegionLabel::bipolaron;
    return state.beta > state.alpha ? RegionLabel::quadpolaron_overweighted
                                    : RegionLabel::quadpolaron_normal;
}

std::vector<DiagramCell> sweep_g(const ModelParams& params_template,
                                 const std::vector<double>& g_grid, const SweepConfig& cfg) {
    params_template.validate();
    for (std::size_t i = 1; i < g_grid.size(); ++i)
        if (!(g_grid[i] >= g_grid[i - 1]))
            throw std::invalid_argument("sweep_g: g grid must be ascending");
    std::vector<DiagramCell> cells;
    cells.reserve(g_grid.size());
    std::optional<VariationalState> warm;
    for (double g : g_grid) {
        ModelParams p = params_template;
        p.g = g;
        cells.push_back(make_cell(p, cfg, warm));
        warm = cells.back().state;
    }
    return cells;
}

std::optional<std::pair<double, double>> weight_crossing(double omega_ratio, double big_omega,
                                                         const BoundarySearchConfig& cfg) {
    ModelParams p;
    p.omega = big_omega > 0.0 ? omega_ratio * big_omega : omega_ratio;
    p.big_omega = big_omega;
    const DerivedParams d = derive(p);
    SweepConfig sc = cfg.sweep;
    sc.with_ed = false;

    const std::vector<double> gs = g_grid_for(d.gc, cfg);
    const std::vector<DiagramCell> cells = sweep_g(p, gs, sc);
    auto rev = [](const DiagramCell& c) { return c.state.beta > c.state.alpha; };

    // sign changes of (alpha - beta) along the grid
    std::vector<int> flips;
    for (int i = 1; i < int(cells.size()); ++i)
        if (rev(cells[i]) != rev(cells[i - 1])) flips.push_back(i);
    bool any_rev = false;
    for (const auto& c : cells) any_rev = any_rev || rev(c);
    if (!any_rev) return std::nullopt;

    // refine each flip by bisection on sign(alpha - beta)
    auto refine = [&](int idx) {
        double lo = gs[idx - 1], hi = gs[idx];
        const bool lo_rev = rev(cells[idx - 1]);
        std::optional<VariationalState> warm = cells[idx - 1].state;
        while (hi - lo > cfg.tol_g * big_omega) {
            const double mid = 0.5 * (lo + hi);
            ModelParams q = p;
            q.g = mid;
            OptimizerConfig oc = sc.opt;
            oc.warm_start = warm;
            const VariationalSolution s = optimize_ground(q, oc);
            warm = s.state;
            const bool mid_rev = s.state.beta > s.state.alpha;
            if (mid_rev == lo_rev)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    double lower, upper;
    if (flips.empty()) {
        // reversed over the whole scanned range
        lower = gs.front();
        upper = gs.back();
    } else if (flips.size() == 1) {
        const double crossing = refine(flips.front());
        if (rev(cells.front())) {
            lower = gs.front();
            upper = crossing;
        } else {
            lower = crossing;
            upper = gs.back();
        }
    } else {
        lower = refine(flips.front());
        upper = refine(flips.back());
    }
    return std::make_pair(lower, upper);
}

double xi_minimum(double omega_ratio, double big_omega, const BoundarySearchConfig& cfg) {
    return interior_extremum(omega_ratio, big_omega, cfg, +1.0, false);
}

double gamma_maximum(double omega_ratio, double big_omega, const BoundarySearchConfig& cfg) {
    return interior_extremum(omega_ratio, big_omega, cfg, -1.0, true);
}

Diagram build_diagram(const std::vector<double>& omega_ratios, double big_omega,
                      const GridSpec& g_grid, const SweepConfig& cfg) {
    if (omega_ratios.empty()) throw std::invalid_argument("build_diagram: empty omega grid");
    if (g_grid.points < 2) throw std::invalid_argument("build_diagram: need at least 2 g points");
    const int rows = int(omega_ratios.size());
    const int cols = g_grid.points;

    Diagram out;
    out.cells.resize(std::size_t(rows) * cols);
    std::vector<std::optional<std::pair<double, double>>> crossings(rows);
    std::vector<std::optional<double>> ximins(rows);

    parallel_for(
        rows,
        [&](int r) {
            ModelParams p;
            p.omega = omega_ratios[r] * big_omega;
            p.big_omega = big_omega;
            const DerivedParams d = derive(p);
            std::vector<double> gs(cols);
            for (int c = 0; c < cols; ++c)
                gs[c] = d.gc * (g_grid.min + (g_grid.max - g_grid.min) * double(c) / double(cols - 1));
            const std::vector<DiagramCell> row = sweep_g(p, gs, cfg);
            for (int c = 0; c < cols; ++c) out.cells[std::size_t(r) * cols + c] = row[c];

            BoundarySearchConfig bc;
            bc.sweep = cfg;
            bc.sweep.with_ed = false;
            crossings[r] = weight_crossing(omega_ratios[r], big_omega, bc);
            try {
                ximins[r] = xi_minimum(omega_ratios[r], big_omega, bc);
            } catch (const std::runtime_error&) {
                ximins[r] = std::nullopt;  // monotone over the scanned range
            }
        },
        cfg.threads);

    BoundaryCurve gc_curve{BoundaryKind::gc_analytic, {}};
    BoundaryCurve xi_curve{BoundaryKind::xi_minimum, {}};
    BoundaryCurve lo_curve{BoundaryKind::weight_crossing_lower, {}};
    BoundaryCurve hi_curve{BoundaryKind::weight_crossing_upper, {}};
    for (int r = 0; r < rows; ++r) {
        ModelParams p;
        p.omega = omega_ratios[r] * big_omega;
        p.big_omega = big_omega;
        gc_curve.points.emplace_back(omega_ratios[r], derive(p).gc);
        if (ximins[r]) xi_curve.points.emplace_back(omega_ratios[r], *ximins[r]);
        if (crossings[r]) {
            lo_curve.points.emplace_back(omega_ratios[r], crossings[r]->first);
            hi_curve.points.emplace_back(omega_ratios[r], crossings[r]->second);
        }
    }
    out.curves = {gc_curve, xi_curve, lo_curve, hi_curve};
    return out;
}

}  // namespace rabi
