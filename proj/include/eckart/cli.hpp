#pragma once

#include "eckart/io.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace eckart::cli {

enum class Command { validate, modes, frame, decompose, heisenberg, commutators };

enum class ExitCode : int { ok = 0, input_error = 1, check_failed = 2 };

std::optional<Command> parse_command(const std::string& name);
const char* to_string(Command command);

struct RunConfig {
    Command command = Command::validate;
    std::string input_path;
    std::string trajectory_path;  // empty when absent
    std::string output_path;      // empty writes to the output stream
    std::string format = "json";

    double tol_eckart = 1e-10;
    double tol_roundtrip = 1e-9;
    double tol_quad = 1e-6;

    std::size_t grid_line = 48001;
    double line_extent = 12.0;
    std::size_t grid_theta = 96;
    std::size_t grid_dirs = 512;

    std::optional<double> hbar;
    std::uint64_t seed = 0;
    /// Random states per kind added by `heisenberg`.
    std::size_t random_states = 10;

    /// Throws InputError for non-positive tolerances or undersized grids.
    void validate() const;
};

/// Builds the report for one command. Throws InputError or NumericalError.
io::Report build_report(const RunConfig& config);

/// Runs one command, writes the report and returns the exit code: 0 when
/// every check passes, 2 when a check fails or a solver does not converge,
/// 1 for invalid input. Diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace eckart::cli
