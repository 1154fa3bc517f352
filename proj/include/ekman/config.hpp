/// @file config.hpp
/// @brief Key-value scenario configuration: parsing, validation with full
///        error reporting, and a canonical serialization used for hashing.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ekman/geometry.hpp"
#include "ekman/limit2d.hpp"
#include "ekman/surface.hpp"

namespace ekman {

/// Everything a run needs, with defaults that form a valid flat scenario.
/// The text format is `key = value` per line, `#` starts a comment; the
/// recognized keys are exactly the ones emitted by canonical().
struct ScenarioConfig {
    // surface
    std::string surface_preset = "flat";  // flat | bump | eggcarton
    double surface_c = 0.0;               // flat offset
    double surface_amp = 0.05;            // bump / eggcarton amplitude
    double surface_width = 0.25;          // bump width
    int surface_kx = 1, surface_ky = 1;   // eggcarton mode counts

    // grid
    int nx = 64, ny = 64, n_zeta = 96;
    double lx = 6.283185307179586476925286766559;
    double ly = 6.283185307179586476925286766559;

    // physics: one epsilon runs a single scenario, several run a sweep
    double nu = 0.05;
    std::vector<double> eps_list = {1e-3};
    double sigma = 1.0;                        // well-preparedness exponent
    std::string admissibility = "theorem-1";   // theorem-1 | theorem-2

    // initial data
    std::string data_preset = "taylor-green";  // taylor-green | band-random | bump
    double amplitude = 0.5;
    unsigned long long seed = 1;
    double smoothness = 2.0;  // regularity index carried as metadata only

    // time
    double horizon = 5.0;
    double dt = 0.0;  // 0 = choose from the advective stability limit
    int stride = 10;  // record every this many steps

    // verification
    bool strict = false;
    double tol_slope = 0.1;      // half-width around the expected rate 0.5
    double tol_flat_rate = 0.01; // relative tolerance on the flat energy rate

    // output
    std::string output = "out";

    bool sweep_mode() const { return eps_list.size() > 1; }
    double eps() const { return eps_list.front(); }
    AdmissMode admiss_mode() const;
    SurfaceSpec surface() const;
    InitialData initial_data() const;
    Grid2D grid() const { return Grid2D(nx, ny, lx, ly); }

    /// Fixed-order `key = value` text that parses back to an equal config;
    /// the basis for the provenance hash.
    std::string canonical() const;
};

/// Carries every problem found in one pass; what() joins them line by line.
struct ConfigError : std::runtime_error {
    std::vector<std::string> errors;
    explicit ConfigError(std::vector<std::string> errs);
};

/// Parses and validates; throws ConfigError listing all violations with
/// their line and key context, never just the first one. Overrides are
/// "key=value" strings applied after the file, winning over it.
ScenarioConfig parse_config(const std::string& text,
                            const std::vector<std::string>& overrides = {});

/// parse_config on the contents of a file.
ScenarioConfig load_config_file(const std::string& path);

}  // namespace ekman
