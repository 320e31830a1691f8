#include "eckart/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using eckart::cli::RunConfig;

    CLI::App app{"Eckart-frame analysis of molecular configurations and grid wavefunctions"};
    RunConfig config;
    std::string command;
    double hbar = 0.0;

    app.add_option("command", command, "validate | modes | frame | decompose | heisenberg | commutators")
        ->required();
    app.add_option("--input", config.input_path, "molecule JSON file")->required();
    app.add_option("--trajectory", config.trajectory_path, "trajectory file (frame, decompose)");
    app.add_option("--output", config.output_path, "report path (default: standard output)");
    app.add_option("--format", config.format, "json or csv")->capture_default_str();
    app.add_option("--tol-eckart", config.tol_eckart, "relative Eckart residual tolerance")->capture_default_str();
    app.add_option("--tol-roundtrip", config.tol_roundtrip, "round-trip and decomposition tolerance")
        ->capture_default_str();
    app.add_option("--tol-quad", config.tol_quad, "Heisenberg quadrature tolerance, in units of hbar")
        ->capture_default_str();
    app.add_option("--grid-line", config.grid_line, "points of the line grid")->capture_default_str();
    app.add_option("--line-extent", config.line_extent, "line grid covers [-extent, extent]")->capture_default_str();
    app.add_option("--grid-theta", config.grid_theta, "rotation-angle nodes")->capture_default_str();
    app.add_option("--grid-dirs", config.grid_dirs, "axis directions")->capture_default_str();
    auto* hbar_opt = app.add_option("--hbar", hbar, "override the molecule's hbar");
    app.add_option("--seed", config.seed, "random seed")->capture_default_str();
    app.add_option("--states", config.random_states, "random states per kind for heisenberg")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(eckart::cli::ExitCode::input_error);
    }

    const auto parsed = eckart::cli::parse_command(command);
    if (!parsed) {
        std::cerr << "error: unknown command '" << command << "'\n";
        return static_cast<int>(eckart::cli::ExitCode::input_error);
    }
    config.command = *parsed;
    if (hbar_opt->count() > 0) {
        config.hbar = hbar;
    }
    return eckart::cli::run(config, std::cout, std::cerr);
}
