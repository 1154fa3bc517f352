/// @file ekman_main.cpp
/// @brief Command-line entry point: config loading, overrides, dispatch.
///
/// Exit codes: 0 = ran and passed, 1 = a verification check failed,
/// 2 = usage, configuration, or IO problem.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ekman/manifest.hpp"
#include "ekman/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"rotating boundary-layer toolkit: limit flow, wall-layer "
                 "reconstruction, and convergence audits"};
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> sets;
    std::string artifact = "all";
    app.add_option("-c,--config", config_path, "configuration file (key = value lines)");
    app.add_option("--set", sets, "override one config key, e.g. --set grid.nx=128")
        ->type_name("KEY=VALUE");

    app.add_subcommand("geometry-check",
                       "closed-form geometry identities and admissibility");
    app.add_subcommand("simulate", "integrate the limit flow and record norms");
    app.add_subcommand("reconstruct", "assemble the wall-layer approximation");
    app.add_subcommand("residual-sweep", "epsilon ladder of residual norms");
    app.add_subcommand("decay-check", "long-horizon decay-rate audit");
    auto* plot = app.add_subcommand("plot", "render SVG artifacts from a run directory");
    plot->add_option("--artifact", artifact, "one of: all, norms, spiral, slice");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string text =
            config_path.empty() ? std::string() : ekman::read_text_file(config_path);
        const ekman::ScenarioConfig cfg = ekman::parse_config(text, sets);
        const std::string sub = app.get_subcommands().front()->get_name();
        const ekman::RunResult r = ekman::run_subcommand(sub, cfg, artifact);
        std::cout << r.report;
        return r.exit_code;
    } catch (const ekman::ConfigError& e) {
        std::cerr << "ERROR (config): " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ERROR (usage): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ERROR (io): " << e.what() << "\n";
        return 2;
    }
}
