#pragma once

#include "eckart/quantum.hpp"

#include <string>
#include <vector>

namespace eckart::quantum {

enum class SuiteKind { vibrational, electronic, rotational };

const char* to_string(SuiteKind kind);

/// One conjugate pair of one state.
struct DispersionReport {
    std::string kind;
    std::size_t state = 0;
    std::string observable_a;
    std::string observable_b;
    double delta_a = 0.0;
    double delta_b = 0.0;
    double product = 0.0;
    double bound = 0.0;  // hbar/2 times the structure factor
    bool satisfied = false;
    /// False when an orientation state reaches the cyclic boundary; the
    /// dispersions are then left at zero and `satisfied` is false.
    bool determinate = true;
    double boundary_mass = 0.0;
};

/// Product state: one factor per mode (vibrational) or per electron and
/// Cartesian component, factor 3 nu + j (electronic).
struct LineProductState {
    std::vector<LineWavefunction> factors;
};

struct StateSet {
    std::vector<LineProductState> line;
    std::vector<So3Wavefunction> rotational;
};

struct SuiteOptions {
    double hbar = 1.0;
    /// A pair is satisfied when product + tolerance * hbar >= bound.
    double tolerance = 1e-6;
    double so3_step = 1e-3;
    /// Evaluate n_(j) at the identity instead of at omega, i.e. pair L_j with
    /// omega^k; the bound becomes hbar/2 |<m^(k)_j>|.
    bool fixed_frame = false;
};

/// Reports for every state and every ordered conjugate pair. Throws
/// InputError for an empty or malformed state set.
std::vector<DispersionReport> heisenberg_suite(const StateSet& states, SuiteKind kind, const SuiteOptions& opts = {});

}  // namespace eckart::quantum
