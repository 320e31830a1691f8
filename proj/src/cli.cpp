#include "eckart/cli.hpp"

#include "eckart/angmom.hpp"
#include "eckart/frames.hpp"
#include "eckart/heisenberg.hpp"
#include "eckart/modes.hpp"
#include "eckart/molecule.hpp"
#include "eckart/states.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>

namespace eckart::cli {

namespace {

using io::Cell;
using io::Report;

constexpr double kTolPositionMomentum = 1e-6;
constexpr double kOrderLow = 1.8;
constexpr double kOrderHigh = 2.2;
constexpr double kTolBody = 1e-5;
constexpr double kTolLab = 1e-5;
constexpr double kTolAngvel = 1e-4;

struct Setup {
    Molecule mol;
    ModeBasis basis;
    std::string basis_source;
};

MatX block_rotate(const Mat3& rt, const MatX& v) {
    MatX out(v.rows(), v.cols());
    for (Eigen::Index row = 0; row < v.rows(); row += 3) {
        out.middleRows(row, 3) = rt * v.middleRows(row, 3);
    }
    return out;
}

Setup load(const RunConfig& config) {
    io::MoleculeFile file = io::load_molecule(config.input_path);
    Molecule raw = config.hbar ? file.molecule.with_hbar(*config.hbar) : file.molecule;
    const PreparedMolecule prepared = prepare_equilibrium_with_transform(raw);
    const Mat3 rt = prepared.rotation.transpose();
    Setup s{prepared.molecule, ModeBasis{}, ""};
    if (file.modes) {
        s.basis = build_modes_from_candidates(s.mol, block_rotate(rt, *file.modes));
        s.basis_source = "file candidates";
    } else if (file.hessian) {
        const MatX h = block_rotate(rt, block_rotate(rt, *file.hessian).transpose()).transpose();
        s.basis = build_modes_from_hessian(s.mol, h);
        s.basis_source = "hessian";
    } else {
        s.basis = build_modes(s.mol, config.seed);
        s.basis_source = "generated";
    }
    return s;
}

Cell vec(const Vec3& v) { return std::vector<double>{v[0], v[1], v[2]}; }
Cell vec(const VecX& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double max_norm(const Vec3List& v) {
    double m = 0.0;
    for (const auto& x : v) {
        m = std::max(m, x.norm());
    }
    return m;
}

double max_diff(const Vec3List& a, const Vec3List& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, (a[i] - b[i]).norm());
    }
    return m;
}

// Largest position and momentum discrepancy, each relative to the largest
// magnitude of its kind in `reference`.
double roundtrip_error(const Configuration& reference, const Configuration& rebuilt) {
    const double pos_scale = std::max({1e-300, max_norm(reference.nuclear_positions), max_norm(reference.electron_positions)});
    const double mom_scale = std::max({1e-300, max_norm(reference.nuclear_momenta), max_norm(reference.electron_momenta)});
    const double pos = std::max(max_diff(reference.nuclear_positions, rebuilt.nuclear_positions),
                                max_diff(reference.electron_positions, rebuilt.electron_positions));
    const double mom = std::max(max_diff(reference.nuclear_momenta, rebuilt.nuclear_momenta),
                                max_diff(reference.electron_momenta, rebuilt.electron_momenta));
    const bool moving = mom_scale > 1e-300;
    return std::max(pos / pos_scale, moving ? mom / mom_scale : 0.0);
}

struct RelativeResidual {
    double centre_of_mass;
    double momentum;
    double angular_momentum;
    double duality;
};

RelativeResidual relative_eckart(const Molecule& mol, const ModeBasis& basis) {
    const EckartResidual r = verify_eckart(mol, basis);
    const double mass = mol.masses().nuclear;
    double length = 0.0;
    for (const auto& n : mol.nuclei()) {
        length = std::max(length, n.position.norm());
    }
    return {r.centre_of_mass / (mass * length), r.momentum / std::sqrt(mass),
            r.angular_momentum / (std::sqrt(mass) * length), r.duality};
}

void add_check(Report& report, const std::string& name, double value, double tol) {
    const bool passed = value <= tol;
    report.ok = report.ok && passed;
    report.table.add_row({name, value, tol, passed});
}

Report validate_report(const RunConfig& config, const Setup& s) {
    Report report;
    report.table.columns = {"check", "value", "tolerance", "passed"};
    const RelativeResidual r = relative_eckart(s.mol, s.basis);
    add_check(report, "centre_of_mass", r.centre_of_mass, config.tol_eckart);
    add_check(report, "linear_momentum", r.momentum, config.tol_eckart);
    add_check(report, "angular_momentum", r.angular_momentum, config.tol_eckart);
    add_check(report, "duality", r.duality, config.tol_eckart);
    const auto tensors = alpha_inertia_tensors(s.mol, s.basis);
    double scale = 1.0;
    for (const auto& t : tensors) {
        scale = std::max(scale, t.cwiseAbs().maxCoeff());
    }
    add_check(report, "inertia_symmetry", inertia_symmetry_residual(tensors) / scale, config.tol_eckart);
    report.summary["modes"] = static_cast<std::int64_t>(s.basis.mode_count());
    report.summary["basis"] = s.basis_source;
    return report;
}

Report modes_report(const RunConfig& config, const Setup& s) {
    Report report;
    report.table.columns = {"mode", "frequency", "vector"};
    for (std::size_t a = 0; a < s.basis.mode_count(); ++a) {
        Cell freq = std::monostate{};
        if (a < s.basis.frequencies.size()) {
            freq = s.basis.frequencies[a];
        }
        report.table.add_row({static_cast<std::int64_t>(a + 1), freq, vec(VecX(s.basis.x.col(static_cast<Eigen::Index>(a))))});
    }
    const RelativeResidual r = relative_eckart(s.mol, s.basis);
    const double worst = std::max({r.centre_of_mass, r.momentum, r.angular_momentum, r.duality});
    report.summary["basis"] = s.basis_source;
    report.summary["residual_centre_of_mass"] = r.centre_of_mass;
    report.summary["residual_linear_momentum"] = r.momentum;
    report.summary["residual_angular_momentum"] = r.angular_momentum;
    report.summary["residual_duality"] = r.duality;
    report.summary["tolerance"] = config.tol_eckart;
    report.ok = worst <= config.tol_eckart;
    return report;
}

std::vector<Configuration> trajectory(const RunConfig& config, const Molecule& mol) {
    if (config.trajectory_path.empty()) {
        throw InputError(std::string(to_string(config.command)) + " needs --trajectory");
    }
    return io::load_trajectory(config.trajectory_path, mol);
}

Report frame_report(const RunConfig& config, const Setup& s) {
    const auto frames = trajectory(config, s.mol);
    const InertiaModel inertia = build_inertia(s.mol, s.basis);
    Report report;
    report.table.columns = {"frame",           "orientation", "eckart_residual", "degenerate", "Q",
                            "P",               "q",           "p",               "angular_velocity",
                            "angular_momentum", "roundtrip_error", "passed"};
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const FrameAnalysis a = analyze(s.mol, s.basis, inertia, frames[f], FrameTolerances{config.tol_eckart});
        const double rt = roundtrip_error(frames[f], reconstruct(s.mol, s.basis, a.state));
        const bool passed = rt <= config.tol_roundtrip;
        report.ok = report.ok && passed;
        std::vector<double> q;
        std::vector<double> p;
        for (std::size_t nu = 0; nu < a.state.q.size(); ++nu) {
            for (int c = 0; c < 3; ++c) {
                q.push_back(a.state.q[nu][c]);
                p.push_back(a.state.p[nu][c]);
            }
        }
        report.table.add_row({static_cast<std::int64_t>(f), vec(a.frame.orientation.vector()),
                              a.frame.relative_residual, a.frame.degenerate, vec(a.state.Q), vec(a.state.P), q, p,
                              vec(a.state.angular_velocity), vec(a.state.angular_momentum), rt, passed});
    }
    report.summary["frames"] = static_cast<std::int64_t>(frames.size());
    report.summary["tolerance_eckart"] = config.tol_eckart;
    report.summary["tolerance_roundtrip"] = config.tol_roundtrip;
    return report;
}

Report decompose_report(const RunConfig& config, const Setup& s) {
    const auto frames = trajectory(config, s.mol);
    const InertiaModel inertia = build_inertia(s.mol, s.basis);
    Report report;
    report.table.columns = {"frame",       "total",  "rotational", "deformation", "electronic",
                            "direct", "residual", "passed"};
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const FrameAnalysis a = analyze(s.mol, s.basis, inertia, frames[f], FrameTolerances{config.tol_eckart});
        const AngmomDecomposition d = decompose_angmom(inertia, s.basis, a.state);
        // Rest observables rebuilt from the internal ones, so the direct value
        // does not reuse the extraction.
        const Vec3 direct = rest_angmom(reconstruct_rest(s.mol, s.basis, a.state));
        const Configuration rel = com_split(s.mol, frames[f]).relative;
        double scale = 0.0;
        for (std::size_t mu = 0; mu < rel.nuclear_positions.size(); ++mu) {
            scale += rel.nuclear_positions[mu].norm() * rel.nuclear_momenta[mu].norm();
        }
        for (std::size_t nu = 0; nu < rel.electron_positions.size(); ++nu) {
            scale += rel.electron_positions[nu].norm() * rel.electron_momenta[nu].norm();
        }
        const double diff = (d.total() - direct).norm();
        const double residual = scale > 0.0 ? diff / scale : diff;
        const bool passed = residual <= config.tol_roundtrip;
        report.ok = report.ok && passed;
        report.table.add_row({static_cast<std::int64_t>(f), vec(d.total()), vec(d.rotational), vec(d.deformation),
                              vec(d.electronic), vec(direct), residual, passed});
    }
    report.summary["frames"] = static_cast<std::int64_t>(frames.size());
    report.summary["tolerance"] = config.tol_roundtrip;
    return report;
}

quantum::LineProductState product_state(const std::shared_ptr<const quantum::LineGrid>& grid,
                                        const std::vector<quantum::LineFunction>& factors) {
    quantum::LineProductState state;
    for (const auto& f : factors) {
        state.factors.push_back(quantum::LineWavefunction::sample(grid, f));
    }
    return state;
}

quantum::StateSet line_states(const std::shared_ptr<const quantum::LineGrid>& grid, std::size_t factors, double hbar,
                              std::size_t random_count, std::mt19937_64& rng) {
    quantum::StateSet set;
    std::vector<quantum::LineFunction> ground(factors, quantum::oscillator_state(0, hbar));
    set.line.push_back(product_state(grid, ground));
    std::vector<quantum::LineFunction> excited;
    for (std::size_t i = 0; i < factors; ++i) {
        excited.push_back(quantum::oscillator_state(static_cast<int>(i % 4) + 1, hbar));
    }
    set.line.push_back(product_state(grid, excited));
    for (std::size_t r = 0; r < random_count; ++r) {
        std::vector<quantum::LineFunction> random;
        for (std::size_t i = 0; i < factors; ++i) {
            random.push_back(quantum::random_line_state(rng, hbar));
        }
        set.line.push_back(product_state(grid, random));
    }
    return set;
}

std::shared_ptr<const quantum::So3Grid> so3_grid(const RunConfig& config) {
    quantum::So3GridOptions opts;
    opts.theta_nodes = config.grid_theta;
    opts.direction_nodes = config.grid_dirs;
    return std::make_shared<const quantum::So3Grid>(opts);
}

Report heisenberg_report(const RunConfig& config, const Setup& s) {
    const double hbar = s.mol.hbar();
    const auto line = std::make_shared<const quantum::LineGrid>(-config.line_extent, config.line_extent, config.grid_line);
    const auto sphere = so3_grid(config);
    std::mt19937_64 rng(config.seed);

    quantum::SuiteOptions opts;
    opts.hbar = hbar;
    opts.tolerance = config.tol_quad;

    std::vector<quantum::DispersionReport> reports;
    const auto append = [&reports](std::vector<quantum::DispersionReport> more) {
        reports.insert(reports.end(), more.begin(), more.end());
    };
    append(quantum::heisenberg_suite(line_states(line, s.mol.mode_count(), hbar, config.random_states, rng),
                                     quantum::SuiteKind::vibrational, opts));
    if (s.mol.electron_count() > 0) {
        const std::size_t factors = 3 * static_cast<std::size_t>(s.mol.electron_count());
        append(quantum::heisenberg_suite(line_states(line, factors, hbar, config.random_states, rng),
                                         quantum::SuiteKind::electronic, opts));
    }
    quantum::StateSet rot;
    rot.rotational.emplace_back(sphere, quantum::wrapped_gaussian(0.1));
    for (std::size_t r = 0; r < config.random_states; ++r) {
        rot.rotational.emplace_back(sphere, quantum::random_so3_state(rng));
    }
    append(quantum::heisenberg_suite(rot, quantum::SuiteKind::rotational, opts));

    Report report;
    report.table.columns = {"kind",    "state", "observable_a", "observable_b", "delta_a",      "delta_b",
                            "product", "bound", "satisfied",    "determinate",  "boundary_mass"};
    std::int64_t failed = 0;
    for (const auto& r : reports) {
        failed += r.satisfied ? 0 : 1;
        report.table.add_row({r.kind, static_cast<std::int64_t>(r.state), r.observable_a, r.observable_b, r.delta_a,
                              r.delta_b, r.product, r.bound, r.satisfied, r.determinate, r.boundary_mass});
    }
    report.ok = failed == 0;
    report.summary["reports"] = static_cast<std::int64_t>(reports.size());
    report.summary["violations"] = failed;
    report.summary["hbar"] = hbar;
    report.summary["tolerance"] = config.tol_quad;
    return report;
}

Report commutators_report(const RunConfig& config, const Setup& s) {
    const double hbar = s.mol.hbar();
    Report report;
    report.table.columns = {"relation", "state", "residual", "tolerance", "order", "passed"};
    const auto add = [&report](const std::string& relation, const std::string& state, double residual, double tol,
                               Cell order, bool passed) {
        report.ok = report.ok && passed;
        report.table.add_row({relation, state, residual, tol, order, passed});
    };

    const quantum::LineGrid line(-config.line_extent, config.line_extent, config.grid_line);
    const std::pair<const char*, quantum::LineFunction> line_cases[] = {
        {"oscillator ground state", quantum::oscillator_state(0, hbar)},
        {"coherent state", quantum::coherent_state(0.5, 1.0, hbar)},
    };
    for (const auto& [name, f] : line_cases) {
        const auto c = quantum::position_momentum_commutator(line, f, hbar);
        const bool passed = c.residual <= kTolPositionMomentum && c.order >= kOrderLow && c.order <= kOrderHigh;
        add("[P,Q]", name, c.residual, kTolPositionMomentum, c.order, passed);
    }

    const auto sphere = so3_grid(config);
    const quantum::So3Wavefunction psi(
        sphere, quantum::gaussian_packet(Vec3(0.03, -0.02, 0.01), Vec3(0.3, 0.28, 0.32), Vec3(1.0, -0.5, 0.3)));
    quantum::So3OperatorOptions opts;
    opts.hbar = hbar;
    const auto r = quantum::so3_commutator_residuals(psi, equilibrium_inertia(s.mol), opts);
    const std::string state = "orientation gaussian packet";
    add("[n_(j).L,omega^k]", state, r.body, kTolBody, std::monostate{}, r.body <= kTolBody);
    add("[L,omega^j]", state, r.lab, kTolLab, std::monostate{}, r.lab <= kTolLab);
    add("[Omega^j,omega^k]", state, r.angvel, kTolAngvel, std::monostate{}, r.angvel <= kTolAngvel);
    report.summary["boundary_mass"] = r.boundary_mass;
    report.summary["hbar"] = hbar;
    return report;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw InputError("cannot write '" + path + "'");
    }
    file << text;
    if (!file) {
        throw InputError("failed writing '" + path + "'");
    }
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    for (Command c : {Command::validate, Command::modes, Command::frame, Command::decompose, Command::heisenberg,
                      Command::commutators}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    return std::nullopt;
}

const char* to_string(Command command) {
    switch (command) {
        case Command::validate:
            return "validate";
        case Command::modes:
            return "modes";
        case Command::frame:
            return "frame";
        case Command::decompose:
            return "decompose";
        case Command::heisenberg:
            return "heisenberg";
        case Command::commutators:
            return "commutators";
    }
    return "unknown";
}

void RunConfig::validate() const {
    if (input_path.empty()) {
        throw InputError("--input is required");
    }
    if (format != "json" && format != "csv") {
        throw InputError("--format must be json or csv");
    }
    if (!(tol_eckart > 0.0) || !(tol_roundtrip > 0.0) || !(tol_quad > 0.0)) {
        throw InputError("tolerances must be positive");
    }
    if (grid_line < quantum::LineGrid::kMinPoints) {
        throw InputError("--grid-line must be at least 64");
    }
    if (!(line_extent > 0.0) || !std::isfinite(line_extent)) {
        throw InputError("--line-extent must be positive");
    }
    if (grid_theta < quantum::So3GridOptions::kMinTheta) {
        throw InputError("--grid-theta must be at least 16");
    }
    if (grid_dirs < quantum::So3GridOptions::kMinDirections) {
        throw InputError("--grid-dirs must be at least 32");
    }
    if (hbar && (!(*hbar > 0.0) || !std::isfinite(*hbar))) {
        throw InputError("--hbar must be positive");
    }
}

io::Report build_report(const RunConfig& config) {
    config.validate();
    const Setup s = load(config);
    Report report;
    switch (config.command) {
        case Command::validate:
            report = validate_report(config, s);
            break;
        case Command::modes:
            report = modes_report(config, s);
            break;
        case Command::frame:
            report = frame_report(config, s);
            break;
        case Command::decompose:
            report = decompose_report(config, s);
            break;
        case Command::heisenberg:
            report = heisenberg_report(config, s);
            break;
        case Command::commutators:
            report = commutators_report(config, s);
            break;
    }
    report.command = to_string(config.command);
    report.molecule = s.mol.name();
    report.summary["seed"] = static_cast<std::int64_t>(config.seed);
    return report;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const Report report = build_report(config);
        write_text(config.output_path, config.format == "csv" ? io::to_csv(report) : io::to_json(report), out);
        if (!report.ok) {
            err << "error: " << to_string(config.command) << ": one or more checks exceeded their tolerance\n";
            return static_cast<int>(ExitCode::check_failed);
        }
        return static_cast<int>(ExitCode::ok);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::input_error);
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::check_failed);
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::input_error);
    }
}

}  // namespace eckart::cli
