#pragma once

#include "nldiff/config.hpp"

#include <string>
#include <vector>

namespace nldiff {

inline constexpr const char* kVersion = "nldiff 1.0.0";

struct SummaryRow {
    std::string name;
    bool passed = false;
    double margin = 0.0;
    double slack = 0.0;
    std::string paper_ref;
};

struct ExperimentOutcome {
    int status = 0; // 0 pass, 1 check failure, 3 solver failure
    std::vector<SummaryRow> summary;
};

/// Run one experiment from a sectioned config:
///   [operator] kind = ... (with kind-specific keys)
///   [grid]     n, L, dim
///   [solver]   tol_residual, max_newton, max_inner, damping   (optional)
///   [schedule] T, dt, m, u0 = delta|noise|file:..., snapshots = geometric|all|final
///   [checks]   list = comma-separated check names; alpha, p, slope_target,
///              slope_tol as needed
///   [output]   (reserved; the directory comes from the caller)
///   seed
/// The artifact directory receives meta.json (resolved config + version),
/// trajectory data, kernel and estimate reports, and summary.json with one row
/// per check. Solver failures leave partial outputs plus a FAILED marker.
ExperimentOutcome run_experiment(const KeyValueConfig& cfg, const std::string& out_dir);

/// Built-in experiment presets: "ode-absolute-bound", "fractional-smoothing-1d".
std::string preset_config(const std::string& name);

} // namespace nldiff
