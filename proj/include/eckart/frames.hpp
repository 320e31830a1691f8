#pragma once

#include "eckart/angmom.hpp"
#include "eckart/lie_so3.hpp"
#include "eckart/modes.hpp"
#include "eckart/molecule.hpp"
#include "eckart/state.hpp"

#include <span>

namespace eckart {

struct ComSplit {
    Vec3 position = Vec3::Zero();  // centre-of-mass position
    Vec3 momentum = Vec3::Zero();  // total momentum
    Configuration relative;
};

/// Rotation attaching the body frame to one configuration.
struct EckartFrame {
    so3::Rotation rotation;
    so3::Orientation orientation;
    double residual = 0.0;           // |sum M R0 x (R^-1 R')|
    double relative_residual = 0.0;  // residual / sum M |R0| |R'|
    bool degenerate = false;         // the overlap maximizer is not unique
};

/// Identity-plus-rank-one electron mixing matrix and its closed-form inverse.
struct AMatrix {
    MatX a;
    MatX a_inv;
};

struct FrameTolerances {
    double eckart = 1e-10;  // relative residual of the rotation equation
};

ComSplit com_split(const Molecule& mol, const Configuration& cfg);

/// Inverse of com_split.
Configuration add_com(const Molecule& mol, const Configuration& relative, const Vec3& com_position,
                      const Vec3& com_momentum);

/// Rotation maximizing sum M R0 . (R^-1 R'), found from the 4x4 quaternion
/// eigenproblem. Its stationarity condition is the Eckart rotation equation.
/// Throws InputError if every position is zero and NumericalError if the
/// residual exceeds the tolerance.
EckartFrame solve_eckart(const Molecule& mol, std::span<const Vec3> relative_positions,
                         const FrameTolerances& tol = {});

/// Rotates every relative position and momentum by R^-1.
Configuration to_rest(const EckartFrame& frame, const Configuration& relative);

/// Rotates every rest position and momentum by R.
Configuration from_rest(const so3::Rotation& rotation, const Configuration& rest);

AMatrix a_matrix(const Molecule& mol);

/// Internal observables of a rest configuration. The centre-of-mass fields of
/// the result are left at zero. Throws NumericalError if I(Q) is singular.
InternalState extract_internal(const Molecule& mol, const ModeBasis& basis, const InertiaModel& inertia,
                               const EckartFrame& frame, const Configuration& rest);

/// Rest observables rebuilt from the internal ones.
Configuration reconstruct_rest(const Molecule& mol, const ModeBasis& basis, const InternalState& state);

/// Full laboratory configuration: rest observables rotated by the state's
/// orientation with the centre of mass added back.
Configuration reconstruct(const Molecule& mol, const ModeBasis& basis, const InternalState& state);

struct FrameAnalysis {
    EckartFrame frame;
    InternalState state;
};

/// com_split, solve_eckart, to_rest and extract_internal in sequence.
FrameAnalysis analyze(const Molecule& mol, const ModeBasis& basis, const InertiaModel& inertia,
                      const Configuration& cfg, const FrameTolerances& tol = {});

}  // namespace eckart
