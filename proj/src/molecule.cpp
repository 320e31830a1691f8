#include "eckart/molecule.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eckart {

namespace {

Vec3 centre_of_mass(const std::vector<Nucleus>& nuclei) {
    Vec3 sum = Vec3::Zero();
    double mass = 0.0;
    for (const auto& n : nuclei) {
        sum += n.mass * n.position;
        mass += n.mass;
    }
    return sum / mass;
}

double length_scale(const std::vector<Nucleus>& nuclei, const Vec3& centre) {
    double scale = 0.0;
    for (const auto& n : nuclei) {
        scale = std::max(scale, (n.position - centre).norm());
    }
    return scale;
}

}  // namespace

Molecule::Molecule(std::string name, std::vector<Nucleus> nuclei, int electron_count,
                   double electron_mass, double hbar)
    : name_(std::move(name)),
      nuclei_(std::move(nuclei)),
      electron_count_(electron_count),
      electron_mass_(electron_mass),
      hbar_(hbar) {
    if (nuclei_.size() < 3) {
        throw InputError("a nonlinear molecule needs at least 3 nuclei");
    }
    for (std::size_t mu = 0; mu < nuclei_.size(); ++mu) {
        if (!(nuclei_[mu].mass > 0.0) || !std::isfinite(nuclei_[mu].mass)) {
            std::ostringstream msg;
            msg << "nucleus " << mu << " has non-positive mass";
            throw InputError(msg.str());
        }
        if (!nuclei_[mu].position.allFinite()) {
            std::ostringstream msg;
            msg << "nucleus " << mu << " has a non-finite position";
            throw InputError(msg.str());
        }
    }
    if (electron_count_ < 0) {
        throw InputError("electron count must be non-negative");
    }
    if (!(electron_mass_ > 0.0)) {
        throw InputError("electron mass must be positive");
    }
    if (!(hbar_ > 0.0)) {
        throw InputError("hbar must be positive");
    }
}

MassSummary Molecule::masses() const {
    MassSummary s;
    for (const auto& n : nuclei_) {
        s.nuclear += n.mass;
    }
    s.total = s.nuclear + electron_count_ * electron_mass_;
    return s;
}

Molecule Molecule::with_hbar(double hbar) const {
    return Molecule(name_, nuclei_, electron_count_, electron_mass_, hbar);
}

Mat3 inertia_tensor(const Molecule& mol) {
    Mat3 inertia = Mat3::Zero();
    for (const auto& n : mol.nuclei()) {
        const Vec3& r = n.position;
        inertia += n.mass * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
    }
    return inertia;
}

PreparedMolecule prepare_equilibrium_with_transform(const Molecule& raw) {
    const auto& nuclei = raw.nuclei();
    const Vec3 com = centre_of_mass(nuclei);
    const double scale = length_scale(nuclei, com);
    if (!(scale > 0.0)) {
        throw InputError("degenerate geometry: all nuclei coincide");
    }
    for (std::size_t a = 0; a < nuclei.size(); ++a) {
        for (std::size_t b = a + 1; b < nuclei.size(); ++b) {
            if ((nuclei[a].position - nuclei[b].position).norm() <= 1e-8 * scale) {
                std::ostringstream msg;
                msg << "degenerate geometry: nuclei " << a << " and " << b << " coincide";
                throw InputError(msg.str());
            }
        }
    }

    std::vector<Nucleus> centred = nuclei;
    for (auto& n : centred) {
        n.position -= com;
    }

    // Collinearity: the mass-weighted second-moment tensor has rank one.
    Mat3 second = Mat3::Zero();
    for (const auto& n : centred) {
        second += n.mass * n.position * n.position.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Mat3> moments(second);
    const Vec3 sm = moments.eigenvalues();
    if (sm[1] <= 1e-10 * sm[2]) {
        throw InputError("collinear geometry: a linear molecule has 3N-5 modes, not 3N-6");
    }

    Molecule centred_mol(raw.name(), centred, raw.electron_count(), raw.electron_mass(), raw.hbar());
    const Mat3 inertia = inertia_tensor(centred_mol);
    const double trace = inertia.trace();

    Mat3 axes = Mat3::Identity();
    const Mat3 off = inertia - Mat3(inertia.diagonal().asDiagonal());
    const bool diagonal = off.cwiseAbs().maxCoeff() <= 1e-12 * trace;
    const bool ascending = inertia(0, 0) <= inertia(1, 1) && inertia(1, 1) <= inertia(2, 2);
    if (!(diagonal && ascending)) {
        const Eigen::SelfAdjointEigenSolver<Mat3> solver(inertia);
        axes = solver.eigenvectors();
        for (int j = 0; j < 2; ++j) {
            Eigen::Index k = 0;
            axes.col(j).cwiseAbs().maxCoeff(&k);
            if (axes(k, j) < 0.0) {
                axes.col(j) = -axes.col(j);
            }
        }
        axes.col(2) = axes.col(0).cross(axes.col(1)).normalized();
    }

    for (auto& n : centred) {
        n.position = axes.transpose() * n.position;
    }
    return PreparedMolecule{
        Molecule(raw.name(), std::move(centred), raw.electron_count(), raw.electron_mass(), raw.hbar()),
        com, axes};
}

Molecule prepare_equilibrium(const Molecule& raw) {
    return prepare_equilibrium_with_transform(raw).molecule;
}

bool is_prepared(const Molecule& mol, double tol) {
    const MassSummary m = mol.masses();
    Vec3 first = Vec3::Zero();
    for (const auto& n : mol.nuclei()) {
        first += n.mass * n.position;
    }
    const double scale = std::max(length_scale(mol.nuclei(), Vec3::Zero()), 1.0);
    if (first.norm() > tol * m.nuclear * scale) {
        return false;
    }
    const Mat3 inertia = inertia_tensor(mol);
    const Mat3 off = inertia - Mat3(inertia.diagonal().asDiagonal());
    return off.cwiseAbs().maxCoeff() <= tol * std::max(inertia.trace(), 1.0);
}

Mat3 equilibrium_inertia(const Molecule& mol) {
    if (!is_prepared(mol)) {
        throw InputError("equilibrium geometry is not centred on principal axes; call prepare_equilibrium");
    }
    Mat3 i0 = Mat3::Zero();
    for (const auto& n : mol.nuclei()) {
        const Vec3& r = n.position;
        for (int k = 0; k < 3; ++k) {
            i0(k, k) += n.mass * (r.squaredNorm() - r[k] * r[k]);
        }
    }
    return i0;
}

}  // namespace eckart
