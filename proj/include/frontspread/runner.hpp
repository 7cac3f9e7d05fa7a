#pragma once

#include "frontspread/analysis.hpp"
#include "frontspread/config.hpp"

#include <json.hpp>

#include <string>

namespace frontspread {

inline constexpr const char *kVersion = "frontspread 1.0.0";

struct RunRecord {
    std::string config_hash;
    std::string version;
    double wall_clock_s = 0;
    std::vector<std::pair<std::string, std::string>> manifest; // (path, content hash)
    nlohmann::json summary;
    int exit_code = 0;
};

/// FNV-1a 64-bit content hash, hex-encoded. Used for the output manifest.
std::string fnv1a_hex(const std::string &bytes);

/// 17-significant-digit float formatting used by every CSV writer.
std::string format_float(double v);

/// Routes a validated config to the matching operation, persists every
/// output under out_dir and writes the run record.
RunRecord dispatch(const ExperimentConfig &cfg, const std::string &out_dir);

/// Convenience: run a simulation described by cfg and classify the result.
/// Used by dispatch and by the mu-sweep launcher.
struct SimulationOutcome {
    Trajectory trajectory;
    Classification classification;
    std::optional<double> ell_star;
    bool ell_star_defined = false;
};

/// known_ell_star short-circuits the eigenvalue root-find when the caller has
/// already computed it for this kernel/model pair.
SimulationOutcome run_simulation(const ExperimentConfig &cfg,
                                 std::optional<double> known_ell_star = std::nullopt);

/// Folds a simulation outcome into a sweep sample. A run that hit the ambient
/// margin with its range already beyond the critical length counts as
/// spreading: a finite limit range cannot exceed ell_star.
MuRun mu_run_from_outcome(const SimulationOutcome &outcome, double mu_total, double t_final,
                          double ell_star);

void write_trajectory_csv(const std::string &path, const Trajectory &trajectory);
void write_snapshot_csv(const std::string &path, const Grid &grid, const FieldSnapshot &snap);

} // namespace frontspread
