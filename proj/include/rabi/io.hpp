// io.hpp — deterministic CSV/JSON output, run manifests, companion plot scripts
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rabi/diagram.hpp"
#include "rabi/multimode.hpp"
#include "rabi/potential.hpp"

// single-header nlohmann/json from vendor/
#include "json.hpp"

namespace rabi::io {

inline constexpr const char* kArtifactName = "rabi";
inline constexpr const char* kArtifactVersion = "0.1.0";

// 17 significant digits: bit-faithful across runs, parses back exactly
std::string format_double(double v);

std::string cells_csv_header(bool with_ed);
std::string cell_csv_row(const DiagramCell& cell, bool with_ed);
void write_cells_csv(const std::string& path, const std::vector<DiagramCell>& cells, bool with_ed);

void write_boundaries_csv(const std::string& path, const std::vector<BoundaryCurve>& curves);

void write_potential_csv(const std::string& path, const PotentialProfile& prof);

void write_wavefunction_csv(const std::string& path, const WavefunctionSample& var,
                            const std::optional<WavefunctionSample>& ed);

struct MultimodeSweepRow {
    double g_swept{0.0};
    double energy_var{0.0};
    std::optional<double> energy_ed{};
    double tunneling{0.0};
    bool converged{false};
};

void write_multimode_csv(const std::string& path, const std::vector<MultimodeSweepRow>& rows);

nlohmann::json solution_json(const ModelParams& params, const VariationalSolution& sol);
nlohmann::json observables_json(const Observables& obs);

// resolved config + artifact version, written alongside every command's outputs
void write_manifest(const std::string& path, const std::string& command,
                    const nlohmann::json& resolved_config);
nlohmann::json read_manifest(const std::string& path);

// plain-text gnuplot command file referencing the CSV; emitted, never executed
void write_plot_script(const std::string& path, const std::string& csv_name,
                       const std::string& kind);

}  // namespace rabi::io
