#pragma once

#include "eckart/molecule.hpp"
#include "eckart/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace eckart {

/// Vibrational basis X_{mu alpha} in mass-weighted Cartesian space together
/// with its dual X^alpha_mu. Both are stored as 3N x K matrices whose row
/// 3 mu + c holds Cartesian component c of nucleus mu.
struct ModeBasis {
    MatX x;
    MatX x_dual;
    /// Harmonic frequencies when the basis came from a Hessian, ascending.
    /// Imaginary frequencies are reported as negative numbers.
    std::vector<double> frequencies;

    std::size_t mode_count() const { return static_cast<std::size_t>(x.cols()); }
    std::size_t nucleus_count() const { return static_cast<std::size_t>(x.rows() / 3); }

    Vec3 vec(std::size_t mu, std::size_t alpha) const {
        return x.block<3, 1>(3 * static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(alpha));
    }
    Vec3 dual(std::size_t mu, std::size_t alpha) const {
        return x_dual.block<3, 1>(3 * static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(alpha));
    }

    /// Builds the dual X (X^T X)^-1 for a given direct basis.
    static ModeBasis from_direct(MatX direct);
};

/// Maximum-norm residuals of the Eckart conditions and of duality.
struct EckartResidual {
    double centre_of_mass = 0.0;    // |sum M R0|
    double momentum = 0.0;          // max_alpha |sum sqrt(M) X_alpha|
    double angular_momentum = 0.0;  // max_alpha |sum sqrt(M) R0 x X_alpha|
    double duality = 0.0;           // max |sum X_alpha . X^beta - delta|

    double worst() const;
};

/// Orthonormal basis (3N x 6) of mass-weighted translations and
/// infinitesimal rotations. Throws InputError when the rotations are
/// linearly dependent (collinear geometry).
MatX external_subspace(const Molecule& mol);

/// Orthonormal internal basis from Gaussian random candidates (seeded).
ModeBasis build_modes(const Molecule& mol, std::uint64_t seed = 0);

/// Projects the candidate columns (3N x (3N-6)) off the external subspace and
/// orthonormalizes them in order. Throws InputError when the projected
/// candidates are rank deficient.
ModeBasis build_modes_from_candidates(const Molecule& mol, const MatX& candidates);

/// Normal modes of a Cartesian Hessian (3N x 3N, symmetric): the
/// mass-weighted Hessian is restricted to the internal subspace and
/// diagonalized. Modes are returned by ascending eigenvalue.
ModeBasis build_modes_from_hessian(const Molecule& mol, const MatX& hessian);

/// Pure report; never modifies its inputs.
EckartResidual verify_eckart(const Molecule& mol, const ModeBasis& basis);

/// Projector X X_dual^T onto the internal subspace.
MatX internal_projector(const ModeBasis& basis);

}  // namespace eckart
