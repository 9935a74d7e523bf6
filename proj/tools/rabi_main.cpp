// rabi — batch CLI: single-point solves, sweeps, diagram builds, ED runs,
// potential/wavefunction dumps, multimode benchmarks.
//
// Exit codes: 0 success, 2 invalid flags, 3 non-convergence (outputs still written).

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rabi/diagram.hpp"
#include "rabi/exact.hpp"
#include "rabi/io.hpp"
#include "rabi/multimode.hpp"
#include "rabi/potential.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

struct Common {
    std::string out_dir;
    int threads{0};
    long seed{0};
    int max_evals{20000};
    double tol_energy{0.0};
    double tol_param{1e-8};
    double ed_tol{1e-10};
    int ed_cap{4096};
    bool no_parity_reduction{false};
    double channel_floor{1e-3};
    double crossover_band{0.10};
};

std::string default_out_dir() {
    const char* env = std::getenv("RABI_OUT_DIR");
    return env && *env ? env : ".";
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out_dir, "output directory (default $RABI_OUT_DIR or .)");
    cmd->add_option("--threads", c.threads, "worker pool size (0 = hardware)");
    cmd->add_option("--seed", c.seed, "deterministic seed recorded in the manifest");
    cmd->add_option("--max-evals", c.max_evals, "optimizer evaluations per start");
    cmd->add_option("--tol-energy", c.tol_energy, "optimizer energy tolerance (0 = auto)");
    cmd->add_option("--tol-param", c.tol_param, "optimizer parameter tolerance");
    cmd->add_option("--ed-tol", c.ed_tol, "ED truncation convergence tolerance");
    cmd->add_option("--ed-cap", c.ed_cap, "ED photon truncation cap");
    cmd->add_flag("--no-parity-reduction", c.no_parity_reduction,
                  "diagonalize the full space instead of the parity blocks");
    cmd->add_option("--channel-floor", c.channel_floor, "weighted-overlap channel threshold");
    cmd->add_option("--crossover-band", c.crossover_band, "crossover band around g_c (relative)");
}

json common_json(const Common& c) {
    return json{{"out_dir", c.out_dir.empty() ? default_out_dir() : c.out_dir},
                {"threads", c.threads},
                {"seed", c.seed},
                {"max_evals", c.max_evals},
                {"tol_energy", c.tol_energy},
                {"tol_param", c.tol_param},
                {"ed_tol", c.ed_tol},
                {"ed_cap", c.ed_cap},
                {"no_parity_reduction", c.no_parity_reduction},
                {"channel_floor", c.channel_floor},
                {"crossover_band", c.crossover_band}};
}

Common common_from_json(const json& j) {
    Common c;
    c.out_dir = j.at("out_dir").get<std::string>();
    c.threads = j.at("threads").get<int>();
    c.seed = j.at("seed").get<long>();
    c.max_evals = j.at("max_evals").get<int>();
    c.tol_energy = j.at("tol_energy").get<double>();
    c.tol_param = j.at("tol_param").get<double>();
    c.ed_tol = j.at("ed_tol").get<double>();
    c.ed_cap = j.at("ed_cap").get<int>();
    c.no_parity_reduction = j.at("no_parity_reduction").get<bool>();
    c.channel_floor = j.at("channel_floor").get<double>();
    c.crossover_band = j.at("crossover_band").get<double>();
    return c;
}

rabi::OptimizerConfig optimizer_config(const Common& c) {
    rabi::OptimizerConfig oc;
    oc.max_evals = c.max_evals;
    oc.tol_energy = c.tol_energy;
    oc.tol_param = c.tol_param;
    return oc;
}

rabi::EDConfig ed_config(const Common& c) {
    rabi::EDConfig ec;
    ec.tol_convergence = c.ed_tol;
    ec.n_max_cap = c.ed_cap;
    ec.use_parity_reduction = !c.no_parity_reduction;
    return ec;
}

rabi::SweepConfig sweep_config(const Common& c) {
    rabi::SweepConfig sc;
    sc.opt = optimizer_config(c);
    sc.ed = ed_config(c);
    sc.channel_floor = c.channel_floor;
    sc.crossover_band = c.crossover_band;
    sc.threads = c.threads;
    return sc;
}

fs::path prepare_out_dir(const Common& c) {
    fs::path dir = c.out_dir.empty() ? default_out_dir() : c.out_dir;
    fs::create_directories(dir);
    return dir;
}

rabi::Parity parity_of(const std::string& s) {
    if (s == "negative") return rabi::Parity::negative;
    if (s == "positive") return rabi::Parity::positive;
    throw CLI::ValidationError("--parity must be negative|positive");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1);
    return v;
}

// ----------------------------- command runners ------------------------------
// Every command runs from its resolved-config JSON so that a saved manifest
// reproduces the run exactly.

int run_solve(const json& cfg) {
    const Common c = common_from_json(cfg.at("common"));
    const fs::path dir = prepare_out_dir(c);
    rabi::ModelParams p;
    p.omega = cfg.at("omega").get<double>();
    p.big_omega = cfg.at("bigOmega").get<double>();
    p.g = cfg.at("g").get<double>();
    p.parity = parity_of(cfg.at("parity").get<std::string>());
    const std::string method = cfg.at("method").get<std::string>();
    const int level = cfg.at("level").get<int>();

    bool all_converged = true;
    json out;
    if (method == "variational" || method == "both") {
        const rabi::VariationalSolution sol =
            level == 0 ? rabi::optimize_ground(p, optimizer_config(c))
                       : rabi::excited_energy(p, level, optimizer_config(c));
        out["variational"] = rabi::io::solution_json(p, sol);
        all_converged = all_converged && sol.converged;
    }
    if (method == "self-consistent") {
        const rabi::SelfConsistentSolution sc = rabi::self_consistent_solve(p);
        rabi::VariationalSolution sol;
        sol.state = sc.state;
        sol.converged = sc.converged;
        sol.observables = rabi::observables(p, sc.state);
        out["self_consistent"] = rabi::io::solution_json(p, sol);
        out["self_consistent"]["iterations"] = sc.iterations;
        out["self_consistent"]["residual"] = sc.residual;
        all_converged = all_converged && sc.converged;
    }
    if (method == "ed" || method == "both") {
        rabi::EDConfig ec = ed_config(c);
        ec.n_levels = level + 1;
        const rabi::EDSolution ed = rabi::ed_solve(p, ec);
        json je;
        je["energies"] = ed.energies;
        je["n_max_used"] = ed.n_max_used;
        je["converged"] = ed.converged;
        je["observables"] = rabi::io::observables_json(rabi::ed_observables(ed, p));
        out["ed"] = je;
        all_converged = all_converged && ed.converged;
    }
    out["converged"] = all_converged;

    const fs::path path = dir / "solve.json";
    std::ofstream f(path, std::ios::binary);
    f << out.dump(2) << '\n';
    rabi::io::write_manifest((dir / "solve_manifest.json").string(), "solve", cfg);

    double e = 0.0;
    if (out.contains("variational")) e = out["variational"]["observables"]["energy"].get<double>();
    else if (out.contains("self_consistent")) e = out["self_consistent"]["observables"]["energy"].get<double>();
    else e = out["ed"]["energies"][0].get<double>();
    std::cout << "solve: omega=" << p.omega << " Omega=" << p.big_omega << " g=" << p.g
              << " method=" << method << " level=" << level << " E=" << rabi::io::format_double(e)
              << (all_converged ? "" : " [NOT CONVERGED]") << '\n';
    return all_converged ? kExitOk : kExitNotConverged;
}

int run_sweep(const json& cfg) {
    const Common c = common_from_json(cfg.at("common"));
    const fs::path dir = prepare_out_dir(c);
    const double big_omega = cfg.at("bigOmega").get<double>();
    const std::vector<double> ratios = cfg.at("omega_ratios").get<std::vector<double>>();
    const bool with_ed = cfg.at("with_ed").get<bool>();
    const std::string constraint = cfg.at("constraint").get<std::string>();
    const bool gc_units = cfg.at("g_units").get<std::string>() == "gc";

    rabi::SweepConfig sc = sweep_config(c);
    sc.with_ed = with_ed;

    std::vector<rabi::DiagramCell> cells;
    bool all_converged = true;
    for (double ratio : ratios) {
        rabi::ModelParams p;
        p.omega = ratio * big_omega;
        p.big_omega = big_omega;
        const rabi::DerivedParams d = rabi::derive(p);
        const double scale = gc_units ? d.gc : 1.0;
        std::vector<double> gs = linspace(cfg.at("g_min").get<double>() * scale,
                                          cfg.at("g_max").get<double>() * scale,
                                          cfg.at("g_points").get<int>());
        std::vector<rabi::DiagramCell> row;
        if (constraint == "full") {
            row = rabi::sweep_g(p, gs, sc);
        } else {
            // constrained variants reuse the sweep cell layout
            const rabi::ConstraintSet cs = constraint == "symmetric"
                                               ? rabi::ConstraintSet::symmetric
                                               : rabi::ConstraintSet::no_squeeze;
            std::optional<rabi::VariationalState> warm;
            for (double g : gs) {
                rabi::ModelParams q = p;
                q.g = g;
                rabi::OptimizerConfig oc = sc.opt;
                oc.warm_start = warm;
                const rabi::VariationalSolution sol = rabi::optimize_constrained(q, cs, oc);
                warm = sol.state;
                rabi::DiagramCell cell;
                cell.omega = q.omega;
                cell.big_omega = q.big_omega;
                cell.g = g;
                cell.g_over_gc = d.gc > 0 ? g / d.gc : 0.0;
                cell.state = sol.state;
                cell.observables = sol.observables;
                cell.converged = sol.converged;
                cell.region = rabi::classify(sol.state, sol.observables, d, q, sc);
                if (with_ed) {
                    const rabi::EDSolution ed = rabi::ed_solve(q, sc.ed);
                    cell.ed = rabi::ed_observables(ed, q);
                }
                row.push_back(cell);
            }
        }
        for (auto& cell : row) {
            all_converged = all_converged && cell.converged;
            cells.push_back(cell);
        }
    }
    const fs::path csv = dir / "sweep.csv";
    rabi::io::write_cells_csv(csv.string(), cells, with_ed);
    rabi::io::write_plot_script((dir / "plot_sweep.gnuplot").string(), "sweep.csv", "sweep");
    rabi::io::write_manifest((dir / "sweep_manifest.json").string(), "sweep", cfg);
    std::cout << "sweep: " << cells.size() << " cells -> " << csv.string()
              << (all_converged ? "" : " [NOT CONVERGED]") << '\n';
    return all_converged ? kExitOk : kExitNotConverged;
}

int run_diagram(const json& cfg) {
    const Common c = common_from_json(cfg.at("common"));
    const fs::path dir = prepare_out_dir(c);
    const double big_omega = cfg.at("bigOmega").get<double>();
    const std::vector<double> ratios = cfg.at("omega_ratios").get<std::vector<double>>();
    rabi::GridSpec gs;
    gs.min = cfg.at("g_min").get<double>();
    gs.max = cfg.at("g_max").get<double>();
    gs.points = cfg.at("g_points").get<int>();
    const rabi::Diagram diagram = rabi::build_diagram(ratios, big_omega, gs, sweep_config(c));

    bool all_converged = true;
    for (const auto& cell : diagram.cells) all_converged = all_converged && cell.converged;

    rabi::io::write_cells_csv((dir / "diagram_cells.csv").string(), diagram.cells, false);
    rabi::io::write_boundaries_csv((dir / "diagram_boundaries.csv").string(), diagram.curves);
    rabi::io::write_plot_script((dir / "plot_diagram.gnuplot").string(), "diagram_cells.csv",
                                "diagram");
    rabi::io::write_manifest((dir / "diagram_manifest.json").string(), "diagram", cfg);
    std::cout << "diagram: " << diagram.cells.size() << " cells, " << diagram.curves.size()
              << " boundary curves -> " << (dir / "diagram_cells.csv").string()
              << (all_converged ? "" : " [NOT CONVERGED]") << '\n';
    return all_converged ? kExitOk : kExitNotConverged;
}

int run_potential(const json& cfg) {
    const Common c = common_from_json(cfg.at("common"));
    const fs::path dir = prepare_out_dir(c);
    rabi::ModelParams p;
    p.omega = cfg.at("omega").get<double>();
    p.big_omega = cfg.at("bigOmega").get<double>();
    p.g = cfg.at("g").get<double>();
    const rabi::Spin spin = cfg.at("spin").get<std::string>() == "down" ? rabi::Spin::down
                                                                        : rabi::Spin::up;
    const rabi::VariationalSolution sol = rabi::optimize_ground(p, optimizer_config(c));
    const std::vector<double> grid = linspace(cfg.at("x_min").get<double>(),
                                              cfg.at("x_max").get<double>(),
                                              cfg.at("x_points").get<int>());
    const rabi::PotentialProfile prof = rabi::potential_profile(sol.state, p, grid, spin);
    rabi::io::write_potential_csv((dir / "potential.csv").string(), prof);
    rabi::io::write_plot_script((dir / "plot_potential.gnuplot").string(), "potential.csv",
                                "potential");
    rabi::io::write_manifest((dir / "potential_manifest.json").string(), "potential", cfg);
    std::cout << "potential: " << grid.size() << " points -> " << (dir / "potential.csv").string()
              << (sol.converged ? "" : " [NOT CONVERGED]") << '\n';
    return sol.converged ? kExitOk : kExitNotConverged;
}

int run_wavefunction(const json& cfg) {
    const Common c = common_from_json(cfg.at("common"));
    const fs::path dir = prepare_out_dir(c);
    rabi::ModelParams p;
    p.omega = cfg.at("omega").get<double>();
    p.big_omega = cfg.at("bigOmega").get<double>();
    p.g = cfg.at("g").get<double>();
    const std::string method = cfg.at("method").get<std::string>();
    const std::vector<double> grid = linspace(cfg.at("x_min").get<double>(),
                                              cfg.at("x_max").get<double>(),
                                              cfg.at("x_points").get<int>());
    const rabi::VariationalSolution sol = rabi::optimize_ground(p, optimizer_config(c));
    const rabi::WavefunctionSample var = rabi::wavefunction_eval(sol.state, p, grid);
    std::optional<rabi::WavefunctionSample> ed;
    bool ed_ok = true;
    if (method == "both" || method == "ed") {
        const rabi::EDSolution es = rabi::ed_solve(p, ed_config(c));
        ed = rabi::ed_wavefunction(es, p, grid);
        ed_ok = es.converged;
    }
    rabi::io::write_wavefunction_csv((dir / "wavefunction.csv").string(), var, ed);
    rabi::io::write_plot_script((dir / "plot_wavefunction.gnuplot").string(), "wavefunction.csv",
                                "wavefunction");
    rabi::io::write_manifest((dir / "wavefunction_manifest.json").string(), "wavefunction", cfg);
    const bool ok = sol.converged && ed_ok;
    std::cout << "wavefunction: " << grid.size() << " points -> "
              << (dir / "wavefunction.csv").string() << (ok ? "" : " [NOT CONVERGED]") << '\n';
    return ok ? kExitOk : kExitNotConverged;
}

int run_multimode(const json& cfg) {
    const Common c = common_from_json(cfg.at("common"));
    const fs::path dir = prepare_out_dir(c);
    rabi::ModeParams mp;
    mp.big_omega = cfg.at("bigOmega").get<double>();
    for (const auto& m : cfg.at("modes"))
        mp.modes.push_back({m.at(0).get<double>(), m.at(1).get<double>()});
    const int sweep_mode = cfg.at("sweep_mode").get<int>();
    const bool with_ed = cfg.at("with_ed").get<bool>();
    if (with_ed && mp.modes.size() != 2)
        throw CLI::ValidationError("--with-ed requires exactly two modes");

    bool all_converged = true;
    if (sweep_mode == 0) {
        const rabi::MultimodeSolution sol = rabi::multimode_optimize(mp, optimizer_config(c));
        json out;
        out["energy"] = sol.energy;
        out["sigma_x"] = sol.tunneling;
        out["converged"] = sol.converged;
        out["alpha"] = sol.state.alpha;
        out["beta"] = sol.state.beta;
        json modes = json::array();
        for (std::size_t k = 0; k < mp.modes.size(); ++k) {
            json jm;
            jm["omega"] = mp.modes[k].omega;
            jm["g"] = mp.modes[k].g;
            jm["xiA"] = sol.state.modes[k].xi_a;
            jm["xiB"] = sol.state.modes[k].xi_b;
            jm["zetaA"] = sol.state.modes[k].zeta_a;
            jm["zetaB"] = sol.state.modes[k].zeta_b;
            jm["photon_number"] = sol.per_mode[k].photon_number;
            modes.push_back(jm);
        }
        out["modes"] = modes;
        if (with_ed) {
            const rabi::TwoModeEDSolution ed = rabi::two_mode_ed(mp);
            out["ed_energy"] = ed.energies.front();
            out["ed_converged"] = ed.converged;
            all_converged = all_converged && ed.converged;
        }
        all_converged = all_converged && sol.converged;
        std::ofstream f(dir / "multimode.json", std::ios::binary);
        f << out.dump(2) << '\n';
        std::cout << "multimode: E=" << rabi::io::format_double(sol.energy) << " -> "
                  << (dir / "multimode.json").string()
                  << (all_converged ? "" : " [NOT CONVERGED]") << '\n';
    } else {
        const int k = sweep_mode - 1;
        if (k < 0 || k >= int(mp.modes.size()))
            throw CLI::ValidationError("--sweep-mode out of range");
        const std::vector<double> gs = linspace(cfg.at("g_min").get<double>(),
                                                cfg.at("g_max").get<double>(),
                                                cfg.at("g_points").get<int>());
        std::vector<rabi::io::MultimodeSweepRow> rows;
        rabi::OptimizerConfig oc = optimizer_config(c);
        rabi::TwoModeEDConfig tc;
        tc.tol_convergence = c.ed_tol;
        for (double g : gs) {
            rabi::ModeParams q = mp;
            q.modes[k].g = g;
            const rabi::MultimodeSolution sol = rabi::multimode_optimize(q, oc);
            rabi::io::MultimodeSweepRow row;
            row.g_swept = g;
            row.energy_var = sol.energy;
            row.tunneling = sol.tunneling;
            row.converged = sol.converged;
            if (with_ed) {
                // reuse the previous truncation as the floor for the next point
                const rabi::TwoModeEDSolution ed = rabi::two_mode_ed(q, tc);
                row.energy_ed = ed.energies.front();
                row.converged = row.converged && ed.converged;
                tc.n1 = ed.n1_used;
                tc.n2 = ed.n2_used;
            }
            all_converged = all_converged && row.converged;
            rows.push_back(row);
        }
        rabi::io::write_multimode_csv((dir / "multimode.csv").string(), rows);
        rabi::io::write_plot_script((dir / "plot_multimode.gnuplot").string(), "multimode.csv",
                                    "multimode");
        std::cout << "multimode: " << rows.size() << " points -> "
                  << (dir / "multimode.csv").string()
                  << (all_converged ? "" : " [NOT CONVERGED]") << '\n';
    }
    rabi::io::write_manifest((dir / "multimode_manifest.json").string(), "multimode", cfg);
    return all_converged ? kExitOk : kExitNotConverged;
}

int dispatch(const std::string& command, const json& cfg) {
    if (command == "solve") return run_solve(cfg);
    if (command == "sweep") return run_sweep(cfg);
    if (command == "diagram") return run_diagram(cfg);
    if (command == "potential") return run_potential(cfg);
    if (command == "wavefunction") return run_wavefunction(cfg);
    if (command == "multimode") return run_multimode(cfg);
    throw std::runtime_error("unknown command in manifest: " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deformed polaron-antipolaron solver for the quantum Rabi model"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "single-point ground/excited solve");
    Common c_solve;
    double s_omega = 0.1, s_bigomega = 1.0, s_g = 0.0;
    std::string s_parity = "negative", s_method = "variational";
    int s_level = 0;
    solve->add_option("--omega", s_omega, "oscillator frequency")->required();
    solve->add_option("--Omega", s_bigomega, "level splitting")->required();
    solve->add_option("--g", s_g, "coupling strength")->required();
    solve->add_option("--parity", s_parity, "negative|positive");
    solve->add_option("--method", s_method, "variational|ed|both|self-consistent");
    solve->add_option("--level", s_level, "excited level n (variational)");
    add_common(solve, c_solve);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "coupling sweep at fixed frequency ratio(s)");
    Common c_sweep;
    std::vector<double> sw_ratios{0.1};
    double sw_bigomega = 1.0, sw_gmin = 0.05, sw_gmax = 2.0;
    int sw_points = 40;
    std::string sw_units = "gc", sw_constraint = "full";
    bool sw_with_ed = false;
    sweep->add_option("--omega-ratio", sw_ratios, "omega/Omega values")->required();
    sweep->add_option("--Omega", sw_bigomega, "level splitting");
    sweep->add_option("--g-min", sw_gmin, "sweep start");
    sweep->add_option("--g-max", sw_gmax, "sweep end");
    sweep->add_option("--g-points", sw_points, "grid size");
    sweep->add_option("--g-units", sw_units, "gc|abs: interpret --g-min/--g-max in units of g_c or absolutely");
    sweep->add_option("--constraint", sw_constraint, "full|no_squeeze|symmetric");
    sweep->add_flag("--with-ed", sw_with_ed, "attach ED cross-check columns");
    add_common(sweep, c_sweep);

    // diagram
    auto* diagram = app.add_subcommand("diagram", "2-D (omega/Omega, g) ground-state diagram");
    Common c_diagram;
    std::vector<double> d_ratios;
    double d_bigomega = 1.0, d_rmin = 0.01, d_rmax = 0.6, d_gmin = 0.05, d_gmax = 2.0;
    int d_rpoints = 20, d_gpoints = 20;
    diagram->add_option("--omega-ratio", d_ratios, "explicit omega/Omega list");
    diagram->add_option("--omega-min", d_rmin, "omega/Omega grid start");
    diagram->add_option("--omega-max", d_rmax, "omega/Omega grid end");
    diagram->add_option("--omega-points", d_rpoints, "omega/Omega grid size");
    diagram->add_option("--Omega", d_bigomega, "level splitting");
    diagram->add_option("--g-min", d_gmin, "g grid start (units of g_c)");
    diagram->add_option("--g-max", d_gmax, "g grid end (units of g_c)");
    diagram->add_option("--g-points", d_gpoints, "g grid size");
    add_common(diagram, c_diagram);

    // potential
    auto* potential = app.add_subcommand("potential", "effective-potential profile dump");
    Common c_potential;
    double p_omega = 0.1, p_bigomega = 1.0, p_g = 0.2, p_xmin = 0.0, p_xmax = 0.0;
    int p_points = 401;
    std::string p_spin = "up";
    potential->add_option("--omega", p_omega)->required();
    potential->add_option("--Omega", p_bigomega)->required();
    potential->add_option("--g", p_g)->required();
    potential->add_option("--x-min", p_xmin, "grid start (default -2 g')");
    potential->add_option("--x-max", p_xmax, "grid end (default +2 g')");
    potential->add_option("--x-points", p_points);
    potential->add_option("--spin", p_spin, "up|down");
    add_common(potential, c_potential);

    // wavefunction
    auto* wavefunction = app.add_subcommand("wavefunction", "ground wavefunction dump");
    Common c_wavefunction;
    double w_omega = 0.1, w_bigomega = 1.0, w_g = 0.2, w_xmin = 0.0, w_xmax = 0.0;
    int w_points = 401;
    std::string w_method = "variational";
    wavefunction->add_option("--omega", w_omega)->required();
    wavefunction->add_option("--Omega", w_bigomega)->required();
    wavefunction->add_option("--g", w_g)->required();
    wavefunction->add_option("--x-min", w_xmin, "grid start (default -2 g')");
    wavefunction->add_option("--x-max", w_xmax, "grid end (default +2 g')");
    wavefunction->add_option("--x-points", w_points);
    wavefunction->add_option("--method", w_method, "variational|ed|both");
    add_common(wavefunction, c_wavefunction);

    // multimode
    auto* multimode = app.add_subcommand("multimode", "M-mode solve or two-mode benchmark sweep");
    Common c_multimode;
    std::vector<std::string> m_modes;
    std::string m_modes_file;
    double m_bigomega = 1.0, m_gmin = 0.0, m_gmax = 0.4;
    int m_points = 20, m_sweep_mode = 0;
    bool m_with_ed = false;
    multimode->add_option("--mode", m_modes, "mode as omega,g (repeatable)");
    multimode->add_option("--modes-file", m_modes_file, "CSV with one omega_k,g_k per row");
    multimode->add_option("--Omega", m_bigomega, "level splitting");
    multimode->add_option("--sweep-mode", m_sweep_mode, "1-based mode index to sweep (0 = none)");
    multimode->add_option("--g-min", m_gmin, "swept-mode g start");
    multimode->add_option("--g-max", m_gmax, "swept-mode g end");
    multimode->add_option("--g-points", m_points, "sweep grid size");
    multimode->add_flag("--with-ed", m_with_ed, "two-mode ED benchmark column");
    add_common(multimode, c_multimode);

    // rerun
    auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
    std::string r_manifest;
    rerun->add_option("--manifest", r_manifest, "manifest file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) {
            json cfg{{"common", common_json(c_solve)}, {"omega", s_omega},
                     {"bigOmega", s_bigomega},         {"g", s_g},
                     {"parity", s_parity},             {"method", s_method},
                     {"level", s_level}};
            return run_solve(cfg);
        }
        if (sweep->parsed()) {
            json cfg{{"common", common_json(c_sweep)},
                     {"omega_ratios", sw_ratios},
                     {"bigOmega", sw_bigomega},
                     {"g_min", sw_gmin},
                     {"g_max", sw_gmax},
                     {"g_points", sw_points},
                     {"g_units", sw_units},
                     {"constraint", sw_constraint},
                     {"with_ed", sw_with_ed}};
            return run_sweep(cfg);
        }
        if (diagram->parsed()) {
            std::vector<double> ratios = d_ratios;
            if (ratios.empty()) ratios = linspace(d_rmin, d_rmax, d_rpoints);
            json cfg{{"common", common_json(c_diagram)},
                     {"omega_ratios", ratios},
                     {"bigOmega", d_bigomega},
                     {"g_min", d_gmin},
                     {"g_max", d_gmax},
                     {"g_points", d_gpoints}};
            return run_diagram(cfg);
        }
        if (potential->parsed()) {
            const double gp = rabi::derive({p_omega, p_bigomega, p_g}).gprime;
            const double span = std::max(2.0 * gp, 6.0);
            json cfg{{"common", common_json(c_potential)},
                     {"omega", p_omega},
                     {"bigOmega", p_bigomega},
                     {"g", p_g},
                     {"x_min", p_xmin == 0.0 && p_xmax == 0.0 ? -span : p_xmin},
                     {"x_max", p_xmin == 0.0 && p_xmax == 0.0 ? span : p_xmax},
                     {"x_points", p_points},
                     {"spin", p_spin}};
            return run_potential(cfg);
        }
        if (wavefunction->parsed()) {
            const double gp = rabi::derive({w_omega, w_bigomega, w_g}).gprime;
            const double span = std::max(2.0 * gp, 6.0);
            json cfg{{"common", common_json(c_wavefunction)},
                     {"omega", w_omega},
                     {"bigOmega", w_bigomega},
                     {"g", w_g},
                     {"x_min", w_xmin == 0.0 && w_xmax == 0.0 ? -span : w_xmin},
                     {"x_max", w_xmin == 0.0 && w_xmax == 0.0 ? span : w_xmax},
                     {"x_points", w_points},
                     {"method", w_method}};
            return run_wavefunction(cfg);
        }
        if (multimode->parsed()) {
            json modes = json::array();
            for (const std::string& ms : m_modes) {
                const auto comma = ms.find(',');
                if (comma == std::string::npos)
                    throw CLI::ValidationError("--mode expects omega,g");
                modes.push_back({std::stod(ms.substr(0, comma)), std::stod(ms.substr(comma + 1))});
            }
            if (!m_modes_file.empty()) {
                std::ifstream f(m_modes_file);
                if (!f) throw CLI::ValidationError("cannot open --modes-file");
                std::string line;
                while (std::getline(f, line)) {
                    if (line.empty() || line[0] == '#' || line.rfind("omega", 0) == 0) continue;
                    const auto comma = line.find(',');
                    if (comma == std::string::npos) continue;
                    modes.push_back(
                        {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
                }
            }
            if (modes.empty()) throw CLI::ValidationError("no modes given");
            json cfg{{"common", common_json(c_multimode)},
                     {"modes", modes},
                     {"bigOmega", m_bigomega},
                     {"sweep_mode", m_sweep_mode},
                     {"g_min", m_gmin},
                     {"g_max", m_gmax},
                     {"g_points", m_points},
                     {"with_ed", m_with_ed}};
            return run_multimode(cfg);
        }
        if (rerun->parsed()) {
            const json manifest = rabi::io::read_manifest(r_manifest);
            return dispatch(manifest.at("command").get<std::string>(), manifest.at("config"));
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}
