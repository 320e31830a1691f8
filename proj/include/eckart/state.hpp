#pragma once

#include "eckart/lie_so3.hpp"
#include "eckart/molecule.hpp"
#include "eckart/types.hpp"

namespace eckart {

/// Classical sample of every particle's position and momentum. Depending on
/// context the values are laboratory, relative (centre of mass removed) or
/// rest (rotated into the Eckart frame) observables.
struct Configuration {
    Vec3List nuclear_positions;
    Vec3List nuclear_momenta;
    Vec3List electron_positions;
    Vec3List electron_momenta;

    /// Throws InputError when the array lengths disagree with `mol`.
    void check_against(const Molecule& mol) const;
};

/// Vibrational, rotational and electronic split of a configuration.
struct InternalState {
    Vec3 com_position = Vec3::Zero();
    Vec3 com_momentum = Vec3::Zero();
    VecX Q;                     // mode amplitudes Q^alpha
    VecX P;                     // mode momenta P_alpha
    Vec3List q;                 // electronic internal positions q_(nu)
    Vec3List p;                 // electronic internal momenta p_(nu)
    Vec3 angular_velocity = Vec3::Zero();  // Omega
    Vec3 angular_momentum = Vec3::Zero();  // rest L
    so3::Orientation orientation;          // omega of the Eckart frame
};

}  // namespace eckart
