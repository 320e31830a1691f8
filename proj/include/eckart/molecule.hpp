#pragma once

#include "eckart/lie_so3.hpp"
#include "eckart/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace eckart {

struct Nucleus {
    double mass = 0.0;
    Vec3 position = Vec3::Zero();  // equilibrium position R0
};

struct MassSummary {
    double nuclear = 0.0;  // M
    double total = 0.0;    // M + n m
};

/// Static description of a molecular system: nuclei at their equilibrium
/// positions plus n electrons of mass m. The constructor enforces N >= 3,
/// positive masses and a positive hbar.
class Molecule {
public:
    Molecule(std::string name, std::vector<Nucleus> nuclei, int electron_count = 0,
             double electron_mass = 1.0, double hbar = 1.0);

    const std::string& name() const { return name_; }
    const std::vector<Nucleus>& nuclei() const { return nuclei_; }
    std::size_t nucleus_count() const { return nuclei_.size(); }
    int electron_count() const { return electron_count_; }
    double electron_mass() const { return electron_mass_; }
    double hbar() const { return hbar_; }

    double mass(std::size_t mu) const { return nuclei_[mu].mass; }
    const Vec3& equilibrium(std::size_t mu) const { return nuclei_[mu].position; }

    MassSummary masses() const;

    /// 3N - 6.
    std::size_t mode_count() const { return 3 * nuclei_.size() - 6; }

    Molecule with_hbar(double hbar) const;

private:
    std::string name_;
    std::vector<Nucleus> nuclei_;
    int electron_count_ = 0;
    double electron_mass_ = 1.0;
    double hbar_ = 1.0;
};

/// Rigid motion applied by prepare_equilibrium: prepared = rotation^T (raw - shift).
struct PreparedMolecule {
    Molecule molecule;
    Vec3 shift;
    Mat3 rotation;  // columns are the principal axes expressed in the raw frame
};

/// Recentres the equilibrium geometry on the nuclear centre of mass and
/// rotates it onto its principal axes, moments ascending. Idempotent.
/// Throws InputError for coincident nuclei or a collinear geometry.
PreparedMolecule prepare_equilibrium_with_transform(const Molecule& raw);
Molecule prepare_equilibrium(const Molecule& raw);

/// Full inertia tensor sum_mu M (|R|^2 1 - R R^T) of the equilibrium geometry.
Mat3 inertia_tensor(const Molecule& mol);

/// True when the equilibrium geometry is centred and its inertia tensor
/// diagonal, both relative to the natural scale of the molecule.
bool is_prepared(const Molecule& mol, double tol = 1e-10);

/// Diagonal equilibrium inertia I0. Throws InputError for an unprepared
/// molecule.
Mat3 equilibrium_inertia(const Molecule& mol);

}  // namespace eckart
