#include "eckart/heisenberg.hpp"

#include <cmath>
#include <string>

namespace eckart::quantum {

const char* to_string(SuiteKind kind) {
    switch (kind) {
        case SuiteKind::vibrational:
            return "vibrational";
        case SuiteKind::electronic:
            return "electronic";
        case SuiteKind::rotational:
            return "rotational";
    }
    return "unknown";
}

namespace {

constexpr const char* kAxis[3] = {"x", "y", "z"};

void finish(DispersionReport& r, double hbar, double tolerance) {
    r.product = r.delta_a * r.delta_b;
    r.satisfied = r.determinate && r.product + tolerance * hbar >= r.bound;
}

std::vector<DispersionReport> line_suite(const std::vector<LineProductState>& states, SuiteKind kind,
                                         const SuiteOptions& opts) {
    std::vector<DispersionReport> out;
    for (std::size_t s = 0; s < states.size(); ++s) {
        const auto& factors = states[s].factors;
        if (factors.empty()) {
            throw InputError("product state " + std::to_string(s) + " has no factors");
        }
        if (kind == SuiteKind::electronic && factors.size() % 3 != 0) {
            throw InputError("electronic product state needs three factors per electron");
        }
        std::vector<double> dq(factors.size());
        std::vector<double> dp(factors.size());
        for (std::size_t f = 0; f < factors.size(); ++f) {
            dq[f] = dispersion(factors[f], LineObservable::position, opts.hbar);
            dp[f] = dispersion(factors[f], LineObservable::momentum, opts.hbar);
        }
        const auto label = [kind](const char* head, std::size_t f) {
            if (kind == SuiteKind::vibrational) {
                return std::string(head) + std::to_string(f + 1);
            }
            return std::string(head) + std::to_string(f / 3 + 1) + "^" + kAxis[f % 3];
        };
        for (std::size_t a = 0; a < factors.size(); ++a) {
            for (std::size_t b = 0; b < factors.size(); ++b) {
                DispersionReport r;
                r.kind = to_string(kind);
                r.state = s;
                r.observable_a = label(kind == SuiteKind::vibrational ? "Q^" : "q_", a);
                r.observable_b = label(kind == SuiteKind::vibrational ? "P_" : "p_", b);
                r.delta_a = dq[a];
                r.delta_b = dp[b];
                r.bound = a == b ? 0.5 * opts.hbar : 0.0;
                finish(r, opts.hbar, opts.tolerance);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

std::vector<DispersionReport> rotational_suite(const std::vector<So3Wavefunction>& states, const SuiteOptions& opts) {
    So3OperatorOptions op_opts;
    op_opts.hbar = opts.hbar;
    op_opts.step = opts.so3_step;
    std::vector<DispersionReport> out;
    for (std::size_t s = 0; s < states.size(); ++s) {
        const So3Wavefunction& psi = states[s];
        const double mass = psi.boundary_mass();
        const bool determinate = mass < kBoundaryMassTol;
        double da[3] = {0.0, 0.0, 0.0};
        double db[3] = {0.0, 0.0, 0.0};
        double mean_m[3][3] = {};  // <m^(k)_j>
        if (determinate) {
            for (int i = 0; i < 3; ++i) {
                da[i] = dispersion(psi, opts.fixed_frame ? So3Observable::angmom : So3Observable::body_angmom, i,
                                   op_opts);
                db[i] = dispersion(psi, So3Observable::position, i, op_opts);
            }
            if (opts.fixed_frame) {
                const So3Grid& grid = psi.grid();
                for (std::size_t n = 0; n < grid.size(); ++n) {
                    const double w = grid.weight(n) * std::norm(psi.values()[static_cast<Eigen::Index>(n)]);
                    const so3::KillingFrame frame = so3::killing_frame(grid.node(n));
                    for (int j = 0; j < 3; ++j) {
                        for (int k = 0; k < 3; ++k) {
                            mean_m[j][k] += w * frame.m(k, j);
                        }
                    }
                }
            }
        }
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                DispersionReport r;
                r.kind = to_string(SuiteKind::rotational);
                r.state = s;
                r.observable_a = opts.fixed_frame ? std::string("L_") + std::to_string(j + 1)
                                                  : std::string("n_(") + std::to_string(j + 1) + ").L";
                r.observable_b = std::string("omega^") + std::to_string(k + 1);
                r.delta_a = da[j];
                r.delta_b = db[k];
                r.determinate = determinate;
                r.boundary_mass = mass;
                r.bound = opts.fixed_frame ? 0.5 * opts.hbar * std::abs(mean_m[j][k]) : (j == k ? 0.5 * opts.hbar : 0.0);
                finish(r, opts.hbar, opts.tolerance);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

}  // namespace

std::vector<DispersionReport> heisenberg_suite(const StateSet& states, SuiteKind kind, const SuiteOptions& opts) {
    if (!(opts.hbar > 0.0) || !(opts.tolerance >= 0.0)) {
        throw InputError("suite needs a positive hbar and a non-negative tolerance");
    }
    if (kind == SuiteKind::rotational) {
        if (states.rotational.empty() || !states.line.empty()) {
            throw InputError("rotational suite needs orientation states only");
        }
        return rotational_suite(states.rotational, opts);
    }
    if (states.line.empty() || !states.rotational.empty()) {
        throw InputError(std::string(to_string(kind)) + " suite needs line product states only");
    }
    return line_suite(states.line, kind, opts);
}

}  // namespace eckart::quantum
