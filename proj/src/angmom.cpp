#include "eckart/angmom.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace eckart {

std::vector<Mat3> alpha_inertia_tensors(const Molecule& mol, const ModeBasis& basis) {
    if (basis.nucleus_count() != mol.nucleus_count()) {
        throw InputError("mode basis and molecule disagree on the number of nuclei");
    }
    std::vector<Mat3> tensors(basis.mode_count(), Mat3::Zero());
    for (std::size_t a = 0; a < basis.mode_count(); ++a) {
        Mat3& t = tensors[a];
        for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
            const double s = std::sqrt(mol.mass(mu));
            const Vec3 x = basis.vec(mu, a);
            const Vec3& r0 = mol.equilibrium(mu);
            for (int k = 0; k < 3; ++k) {
                const Vec3 kx = Vec3::Unit(k).cross(x);
                for (int l = 0; l < 3; ++l) {
                    t(k, l) += s * kx.dot(Vec3::Unit(l).cross(r0));
                }
            }
        }
    }
    return tensors;
}

double inertia_symmetry_residual(std::span<const Mat3> tensors) {
    double worst = 0.0;
    for (const auto& t : tensors) {
        worst = std::max(worst, (t - t.transpose()).cwiseAbs().maxCoeff());
    }
    return worst;
}

InertiaModel build_inertia(const Molecule& mol, const ModeBasis& basis, double symmetry_tol) {
    InertiaModel model;
    model.i0 = equilibrium_inertia(mol);
    model.i_alpha = alpha_inertia_tensors(mol, basis);
    double scale = 1.0;
    for (const auto& t : model.i_alpha) {
        scale = std::max(scale, t.cwiseAbs().maxCoeff());
    }
    const double residual = inertia_symmetry_residual(model.i_alpha);
    if (residual > symmetry_tol * scale) {
        std::ostringstream msg;
        msg << "I_alpha tensors are not symmetric (residual " << residual
            << "); the mode basis violates the angular Eckart condition";
        throw InertiaSymmetryError(msg.str(), residual);
    }
    return model;
}

Mat3 inertia_at(const InertiaModel& model, const VecX& Q) {
    if (static_cast<std::size_t>(Q.size()) != model.i_alpha.size()) {
        throw InputError("mode amplitude vector has the wrong length");
    }
    Mat3 inertia = model.i0;
    for (std::size_t a = 0; a < model.i_alpha.size(); ++a) {
        inertia += Q[static_cast<Eigen::Index>(a)] * model.i_alpha[a];
    }
    return inertia;
}

Mat3 inertia_at_checked(const InertiaModel& model, const VecX& Q) {
    const Mat3 inertia = inertia_at(model, Q);
    const Eigen::SelfAdjointEigenSolver<Mat3> solver(0.5 * (inertia + inertia.transpose()),
                                                     Eigen::EigenvaluesOnly);
    const double smallest = solver.eigenvalues()[0];
    if (!(smallest > 1e-12 * std::max(inertia.trace(), 1e-300))) {
        std::ostringstream msg;
        msg << "instantaneous inertia is not positive definite (smallest eigenvalue " << smallest << ")";
        throw NumericalError(msg.str());
    }
    return inertia;
}

double positive_definite_radius(const InertiaModel& model) {
    const Eigen::SelfAdjointEigenSolver<Mat3> i0(model.i0, Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (const auto& t : model.i_alpha) {
        const Eigen::JacobiSVD<Mat3> svd(t);
        const double norm = svd.singularValues()[0];
        sum += norm * norm;
    }
    if (sum == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return i0.eigenvalues()[0] / std::sqrt(sum);
}

Vec3 relative_angmom(const Configuration& relative) {
    Vec3 l = Vec3::Zero();
    for (std::size_t mu = 0; mu < relative.nuclear_positions.size(); ++mu) {
        l += relative.nuclear_positions[mu].cross(relative.nuclear_momenta[mu]);
    }
    for (std::size_t nu = 0; nu < relative.electron_positions.size(); ++nu) {
        l += relative.electron_positions[nu].cross(relative.electron_momenta[nu]);
    }
    return l;
}

// The symmetrized cross product (A x B - B x A) / 2 reduces to A x B on
// commuting sample values, so the classical form is the same sum.
Vec3 rest_angmom(const Configuration& rest) { return relative_angmom(rest); }

AngmomDecomposition decompose_angmom(const InertiaModel& model, const ModeBasis& basis,
                                     const InternalState& state) {
    if (state.q.size() != state.p.size()) {
        throw InputError("electronic internal positions and momenta differ in length");
    }
    AngmomDecomposition d;
    d.rotational = inertia_at(model, state.Q) * state.angular_velocity;
    if (state.P.size() != state.Q.size()) {
        throw InputError("mode momentum vector has the wrong length");
    }
    const VecX displacement = basis.x * state.Q;
    const VecX momentum = basis.x_dual * state.P;
    for (std::size_t mu = 0; mu < basis.nucleus_count(); ++mu) {
        const auto row = 3 * static_cast<Eigen::Index>(mu);
        d.deformation += Vec3(displacement.segment<3>(row)).cross(Vec3(momentum.segment<3>(row)));
    }
    for (std::size_t nu = 0; nu < state.q.size(); ++nu) {
        d.electronic += state.q[nu].cross(state.p[nu]);
    }
    return d;
}

}  // namespace eckart
