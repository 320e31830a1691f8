#pragma once

#include "eckart/modes.hpp"
#include "eckart/molecule.hpp"
#include "eckart/state.hpp"

#include <span>
#include <vector>

namespace eckart {

/// Linear inertia model I(Q) = I0 + Q^alpha I_alpha.
struct InertiaModel {
    Mat3 i0 = Mat3::Zero();
    std::vector<Mat3> i_alpha;
};

/// Raw I_alpha tensors, (I_alpha)_kl = sum_mu sqrt(M_mu) (e_k x X_mu_alpha).(e_l x R0_mu).
/// No symmetry is imposed.
std::vector<Mat3> alpha_inertia_tensors(const Molecule& mol, const ModeBasis& basis);

/// max_alpha max_kl |(I_alpha)_kl - (I_alpha)_lk|.
double inertia_symmetry_residual(std::span<const Mat3> tensors);

/// Thrown by build_inertia when the I_alpha are not symmetric, which happens
/// exactly when the basis breaks the angular Eckart condition.
class InertiaSymmetryError : public NumericalError {
public:
    InertiaSymmetryError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

InertiaModel build_inertia(const Molecule& mol, const ModeBasis& basis, double symmetry_tol = 1e-10);

/// I(Q). The checked variant throws NumericalError when I(Q) is not
/// positive definite.
Mat3 inertia_at(const InertiaModel& model, const VecX& Q);
Mat3 inertia_at_checked(const InertiaModel& model, const VecX& Q);

/// Radius in Q-space inside which I(Q) is guaranteed positive definite:
/// lambda_min(I0) / sqrt(sum_alpha |I_alpha|_2^2).
double positive_definite_radius(const InertiaModel& model);

/// sum R' x P' + sum r' x p'.
Vec3 relative_angmom(const Configuration& relative);

/// Classical rest orbital angular momentum, sum R'' x P'' + sum r'' x p''.
Vec3 rest_angmom(const Configuration& rest);

struct AngmomDecomposition {
    Vec3 rotational = Vec3::Zero();   // I(Q) Omega
    Vec3 deformation = Vec3::Zero();  // sum_mu (Q^a X_mu_a) x (P_b X^b_mu)
    Vec3 electronic = Vec3::Zero();   // sum_nu q x p

    Vec3 total() const { return rotational + deformation + electronic; }
};

AngmomDecomposition decompose_angmom(const InertiaModel& model, const ModeBasis& basis,
                                     const InternalState& state);

}  // namespace eckart
