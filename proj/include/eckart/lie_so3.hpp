#pragma once

#include "eckart/types.hpp"

#include <numbers>

namespace eckart::so3 {

inline constexpr double kPi = std::numbers::pi;

/// Default distance from the ball boundary |omega| = pi below which the
/// Killing frame is considered regular.
inline constexpr double kBoundaryEpsilon = 1e-6;

/// Axis-angle orientation vector: direction is the rotation axis, norm is the
/// angle. Always lives in the closed ball of radius pi.
class Orientation {
public:
    Orientation() = default;

    /// Throws InputError when |omega| exceeds pi. Inputs are never wrapped.
    explicit Orientation(const Vec3& omega);

    const Vec3& vector() const { return omega_; }
    double angle() const { return omega_.norm(); }
    double operator[](int i) const { return omega_[i]; }

private:
    Vec3 omega_ = Vec3::Zero();
};

/// Proper orthogonal 3x3 matrix.
class Rotation {
public:
    Rotation() = default;

    /// Validates orthogonality and unit determinant to `tol`.
    explicit Rotation(const Mat3& r, double tol = 1e-10);

    static Rotation identity() { return Rotation(); }

    const Mat3& matrix() const { return r_; }
    Rotation inverse() const;
    Vec3 operator*(const Vec3& v) const { return r_ * v; }
    Rotation operator*(const Rotation& other) const;

private:
    struct Unchecked {};
    Rotation(const Mat3& r, Unchecked) : r_(r) {}

    Mat3 r_ = Mat3::Identity();

    friend Rotation exp_map(const Orientation&);
};

/// Right-trivialized Killing vectors (columns of `n`) and their duals
/// (rows of `m`); `n * m` is the identity.
struct KillingFrame {
    Mat3 n;
    Mat3 m;

    Vec3 killing_vector(int j) const { return n.col(j); }
    Vec3 dual_vector(int k) const { return m.row(k).transpose(); }
};

/// Generator G_j with G_j x = e_j x x. Axis index is 1-based (1..3).
Mat3 generator(int axis);

/// omega . G, i.e. the cross-product matrix of omega.
Mat3 hat(const Vec3& omega);

/// Inverse of hat() for antisymmetric input.
Vec3 vee(const Mat3& a);

/// exp(omega . G). Rodrigues form, with a Taylor branch for angles < 1e-4.
Rotation exp_map(const Orientation& omega);
Rotation exp_map(const Vec3& omega);

/// Canonical orientation of a rotation, |result| <= pi. Angles close to pi
/// use the symmetric-part axis extraction.
Orientation log_map(const Rotation& r);

/// n_(j)(omega) and m^(k)(omega). Throws InputError when
/// |omega| >= pi - boundary_eps, where m = n^-1 blows up.
KillingFrame killing_frame(const Vec3& omega, double boundary_eps = kBoundaryEpsilon);

/// (e^k . R . e_j)(e^j . a), i.e. R a.
Vec3 rotate_observable(const Rotation& r, const Vec3& a);

/// Maps an arbitrary axis-angle vector into the canonical ball: vectors with
/// pi < |x| < 2 pi are replaced by the equivalent (|x| - 2 pi) x / |x|.
Vec3 wrap_to_ball(const Vec3& x);

}  // namespace eckart::so3
