/// @file runner.hpp
/// @brief Subcommand drivers: each one turns a validated configuration into
///        deterministic artifacts in the output directory plus a manifest,
///        and reports PASS/FAIL with a machine-readable failure class.

#pragma once

#include <string>

#include "ekman/config.hpp"

namespace ekman {

/// Outcome of one subcommand. exit_code follows the process convention:
/// 0 = ran and passed, 1 = a check ran and failed (the report names the
/// failure class). Usage and IO problems are thrown instead and map to 2.
struct RunResult {
    int exit_code = 0;
    std::string report;
    bool passed() const { return exit_code == 0; }
};

/// Closed-form identity residuals over the whole grid plus the
/// admissibility scan. Fails when an identity exceeds its threshold or the
/// surface is inadmissible.
RunResult run_geometry_check(const ScenarioConfig& cfg);

/// Integrates the limit flow to the horizon, writes norms.csv, and fits
/// decay rates. On a flat bottom the fitted energy rate must match
/// sqrt(2 nu) to verify.tol_flat_rate; failures are fatal only under
/// verify.strict.
RunResult run_simulate(const ScenarioConfig& cfg);

/// Assembles the boundary-layer approximation at t = 0, writes approx.snap
/// and profiles.csv, and reports the divergence closure and wall traces.
/// Tolerance misses are fatal only under verify.strict.
RunResult run_reconstruct(const ScenarioConfig& cfg);

/// Runs the epsilon ladder (needs at least three strictly decreasing
/// values), writes sweep.csv, and checks the convergence slopes.
RunResult run_residual_sweep(const ScenarioConfig& cfg);

/// Long-horizon decay audit of the limit flow against the guaranteed rates.
RunResult run_decay_check(const ScenarioConfig& cfg);

/// Renders SVG artifacts from files a previous run left in the output
/// directory. artifact is one of: all, norms, spiral, slice.
RunResult run_plot(const ScenarioConfig& cfg, const std::string& artifact);

/// Dispatch by subcommand name; throws std::invalid_argument for unknown
/// names or artifacts.
RunResult run_subcommand(const std::string& name, const ScenarioConfig& cfg,
                         const std::string& artifact = "all");

}  // namespace ekman
