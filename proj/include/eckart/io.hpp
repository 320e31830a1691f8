#pragma once

#include "eckart/molecule.hpp"
#include "eckart/state.hpp"
#include "eckart/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace eckart::io {

/// Contents of a molecule file. `modes` holds one mass-weighted 3N-vector per
/// column; `hessian` is Cartesian. Both are in the file's own frame.
struct MoleculeFile {
    Molecule molecule;
    std::optional<MatX> modes;
    std::optional<MatX> hessian;
};

/// Parses a molecule description. Errors name the offending JSON path and
/// its line. `source` is used in messages only.
MoleculeFile parse_molecule(const std::string& text, const std::string& source = "<input>");
MoleculeFile load_molecule(const std::string& path);

/// Parses an XYZ-style trajectory: per frame a particle count, a comment line
/// and one `species x y z px py pz` line per particle, nuclei first and
/// electrons (species `e`) after.
std::vector<Configuration> parse_trajectory(const std::string& text, const Molecule& mol,
                                            const std::string& source = "<trajectory>");
std::vector<Configuration> load_trajectory(const std::string& path, const Molecule& mol);

std::string read_file(const std::string& path);

/// Report cell: empty, number, integer, text, flag or a vector of numbers.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool, std::vector<double>>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

struct Report {
    std::string command;
    std::string molecule;
    bool ok = true;
    std::map<std::string, Cell> summary;
    Table table;
};

/// JSON object with sorted keys and shortest round-trip numbers; non-finite
/// numbers become null.
std::string to_json(const Report& report);

/// Table as CSV. Vector cells expand to `name_1 .. name_k` columns.
std::string to_csv(const Report& report);

/// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double value);

}  // namespace eckart::io
