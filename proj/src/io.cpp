#include "rabi/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rabi::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary: identical bytes on every platform
    if (!f) throw std::runtime_error("io: cannot open for writing: " + path);
    return f;
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : "nan";
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string cells_csv_header(bool with_ed) {
    std::string h =
        "omega,bigOmega,g,g_over_gc,region,gamma,energy,photon_number,sigma_x,coupling_corr,"
        "alpha,beta,xiA,xiB,zetaA,zetaB,ch_aa,ch_bb,ch_ab,ch_ba,converged";
    if (with_ed)
        h += ",ed_energy,ed_photon_number,ed_sigma_x,ed_coupling_corr,ed_gamma";
    return h;
}

std::string cell_csv_row(const DiagramCell& c, bool with_ed) {
    std::string r;
    r += format_double(c.omega) + ',' + format_double(c.big_omega) + ',' + format_double(c.g) +
         ',' + format_double(c.g_over_gc) + ',' + to_string(c.region) + ',' +
         opt_str(c.observables.gamma) + ',' + format_double(c.observables.energy) + ',' +
         format_double(c.observables.photon_number) + ',' + format_double(c.observables.tunneling) +
         ',' + format_double(c.observables.coupling_corr) + ',' + format_double(c.state.alpha) +
         ',' + format_double(c.state.beta) + ',' + format_double(c.state.xi_a) + ',' +
         format_double(c.state.xi_b) + ',' + format_double(c.state.zeta_a) + ',' +
         format_double(c.state.zeta_b) + ',' + format_double(c.observables.channels.aa) + ',' +
         format_double(c.observables.channels.bb) + ',' + format_double(c.observables.channels.ab) +
         ',' + format_double(c.observables.channels.ba) + ',' + (c.converged ? "1" : "0");
    if (with_ed) {
        if (c.ed) {
            r += ',' + format_double(c.ed->energy) + ',' + format_double(c.ed->photon_number) +
                 ',' + format_double(c.ed->tunneling) + ',' + format_double(c.ed->coupling_corr) +
                 ',' + opt_str(c.ed->gamma);
        } else {
            r += ",nan,nan,nan,nan,nan";
        }
    }
    return r;
}

void write_cells_csv(const std::string& path, const std::vector<DiagramCell>& cells,
                     bool with_ed) {
    auto f = open_out(path);
    f << cells_csv_header(with_ed) << '\n';
    for (const auto& c : cells) f << cell_csv_row(c, with_ed) << '\n';
}

void write_boundaries_csv(const std::string& path, const std::vector<BoundaryCurve>& curves) {
    auto f = open_out(path);
    f << "kind,omega_ratio,g\n";
    for (const auto& curve : curves)
        for (const auto& [ratio, g] : curve.points)
            f << to_string(curve.kind) << ',' << format_double(ratio) << ',' << format_double(g)
              << '\n';
}

void write_potential_csv(const std::string& path, const PotentialProfile& prof) {
    auto f = open_out(path);
    f << "x,v_bare,v_delta,v_total,psi_up,psi_down\n";
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        f << format_double(prof.x[i]) << ',' << format_double(prof.v_bare[i]) << ','
          << format_double(prof.v_delta[i]) << ',' << format_double(prof.v_total[i]) << ','
          << format_double(prof.psi_up[i]) << ',' << format_double(prof.psi_down[i]) << '\n';
    }
}

void write_wavefunction_csv(const std::string& path, const WavefunctionSample& var,
                            const std::optional<WavefunctionSample>& ed) {
    auto f = open_out(path);
    f << "x,psi_up,psi_down";
    if (ed) f << ",ed_psi_up,ed_psi_down";
    f << '\n';
    for (std::size_t i = 0; i < var.x.size(); ++i) {
        f << format_double(var.x[i]) << ',' << format_double(var.psi_up[i]) << ','
          << format_double(var.psi_down[i]);
        if (ed) f << ',' << format_double(ed->psi_up[i]) << ',' << format_double(ed->psi_down[i]);
        f << '\n';
    }
}

void write_multimode_csv(const std::string& path, const std::vector<MultimodeSweepRow>& rows) {
    auto f = open_out(path);
    f << "g_swept,energy_var,energy_ed,sigma_x,converged\n";
    for (const auto& r : rows) {
        f << format_double(r.g_swept) << ',' << format_double(r.energy_var) << ','
          << opt_str(r.energy_ed) << ',' << format_double(r.tunneling) << ','
          << (r.converged ? "1" : "0") << '\n';
    }
}

nlohmann::json observables_json(const Observables& o) {
    nlohmann::json j;
    j["energy"] = o.energy;
    j["photon_number"] = o.photon_number;
    j["coupling_corr"] = o.coupling_corr;
    j["sigma_x"] = o.tunneling;
    j["t"] = o.t;
    j["gamma"] = o.gamma ? nlohmann::json(*o.gamma) : nlohmann::json();
    j["channels"] = {{"aa", o.channels.aa},
                     {"bb", o.channels.bb},
                     {"ab", o.channels.ab},
                     {"ba", o.channels.ba}};
    return j;
}

nlohmann::json solution_json(const ModelParams& p, const VariationalSolution& sol) {
    const DerivedParams d = derive(p);
    nlohmann::json j;
    j["params"] = {{"omega", p.omega},
                   {"bigOmega", p.big_omega},
                   {"g", p.g},
                   {"parity", p.parity == Parity::negative ? "negative" : "positive"}};
    j["derived"] = {{"gprime", d.gprime}, {"e0", d.e0}, {"gc0", d.gc0}, {"gc", d.gc}};
    j["state"] = {{"xiA", sol.state.xi_a},     {"xiB", sol.state.xi_b},
                  {"zetaA", sol.state.zeta_a}, {"zetaB", sol.state.zeta_b},
                  {"alpha", sol.state.alpha},  {"beta", sol.state.beta}};
    j["observables"] = observables_json(sol.observables);
    j["level"] = sol.level;
    j["converged"] = sol.converged;
    j["restarts_used"] = sol.restarts_used;
    j["objective_evals"] = sol.objective_evals;
    return j;
}

void write_manifest(const std::string& path, const std::string& command,
                    const nlohmann::json& resolved_config) {
    nlohmann::json j;
    j["artifact"] = kArtifactName;
    j["version"] = kArtifactVersion;
    j["command"] = command;
    j["config"] = resolved_config;
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

nlohmann::json read_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("io: cannot open manifest: " + path);
    nlohmann::json j;
    f >> j;
    if (!j.contains("command") || !j.contains("config"))
        throw std::runtime_error("io: malformed manifest: " + path);
    return j;
}

void write_plot_script(const std::string& path, const std::string& csv_name,
                       const std::string& kind) {
    auto f = open_out(path);
    f << "# gnuplot commands for " << csv_name << " (run manually: gnuplot " << path << ")\n";
    f << "set datafile separator ','\n";
    f << "set key autotitle columnhead\n";
    if (kind == "sweep") {
        f << "set xlabel 'g/g_c'\nset ylabel 'value'\n";
        f << "plot '" << csv_name << "' using 4:7 with lines title 'energy', \\\n";
        f << "     '" << csv_name << "' using 4:9 with lines title 'sigma_x'\n";
    } else if (kind == "diagram") {
        f << "set xlabel 'omega/Omega'\nset ylabel 'g/g_c'\nset cblabel 'gamma'\n";
        f << "plot '" << csv_name << "' using ($1/$2):4:6 with points pt 5 ps 1.4 palette\n";
    } else if (kind == "potential") {
        f << "set xlabel 'x'\n";
        f << "plot '" << csv_name << "' using 1:4 with lines title 'v_total', \\\n";
        f << "     '" << csv_name << "' using 1:5 with lines title 'psi_up'\n";
    } else if (kind == "wavefunction") {
        f << "set xlabel 'x'\n";
        f << "plot '" << csv_name << "' using 1:2 with lines title 'psi_up'\n";
    } else if (kind == "multimode") {
        f << "set xlabel 'g_1'\nset ylabel 'E'\n";
        f << "plot '" << csv_name << "' using 1:2 with lines title 'variational', \\\n";
        f << "     '" << csv_name << "' using 1:3 with points title 'two-mode ED'\n";
    }
}

}  // namespace rabi::io
