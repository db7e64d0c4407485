#pragma once

#include "vpmcf/config.hpp"
#include "vpmcf/diagnostics.hpp"
#include "vpmcf/shape.hpp"
#include "vpmcf/stepper.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vpmcf {

/// Environment override names.
inline constexpr const char* kEnvOutputRoot = "VPMF_OUTPUT_ROOT";
inline constexpr const char* kEnvThreads = "VPMF_THREADS";

/// VPMF_THREADS clamped to [1, 64]; 1 when unset.
int env_thread_count();

/// Output directory with the VPMF_OUTPUT_ROOT prefix applied.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

struct RunArtifacts {
    RunConfig cfg;
    RunResult result;
    RunHistory history; ///< populated when keep_history (per CSV record)
    WellPreparednessReport preparedness;
    std::filesystem::path out_dir;
};

/// Full pipeline: validate -> initial data -> evolve -> diagnostics files.
/// Writes diagnostics.csv, config.cfg, optional snapshots/, density.csv and
/// monotonicity.csv under the resolved output directory.
RunArtifacts run_experiment(const RunConfig& cfg, bool keep_history = false,
                            bool write_outputs = true);

struct SweepRow {
    double factor = 0.0;
    double param_value = 0.0;
    double volume_drift = 0.0;       ///< max |V - V0| over records
    double dissipation_residual = 0.0; ///< summed interval residuals
    double max_discrepancy = 0.0;
    double oracle_radius_err = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
};

struct SweepSummary {
    std::string parameter;
    std::vector<SweepRow> rows;
    /// log-ratio convergence orders of volume_drift between consecutive rows;
    /// NaN when not applicable.
    std::vector<double> drift_orders;
    std::vector<double> residual_orders;
};

/// Runs the pipeline once per factor (parameter in {dt, eps, n}), writing each
/// run into its own subdirectory plus a sweep_summary.csv. A sub-run failure
/// aborts the sweep after the partial summary is written.
SweepSummary run_sweep(const RunConfig& base, const std::string& parameter,
                       const std::vector<double>& factors);

/// Re-runs the per-snapshot diagnostics over stored .vpmf files; writes
/// check.csv into the directory. Returns the number of snapshots processed.
int run_check(const std::string& history_dir);

} // namespace vpmcf
