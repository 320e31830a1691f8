#include "eckart/lie_so3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eckart::so3 {

namespace {

constexpr double kSeriesAngle = 1e-4;
constexpr double kKillingSeriesAngle = 1e-3;
// Slack for vectors that land a rounding error past pi (e.g. from log_map).
constexpr double kBallSlack = 1e-12;

}  // namespace

Orientation::Orientation(const Vec3& omega) : omega_(omega) {
    if (!omega.allFinite()) {
        throw InputError("orientation vector is not finite");
    }
    const double angle = omega.norm();
    if (angle > kPi + kBallSlack) {
        std::ostringstream msg;
        msg << "orientation angle " << angle << " exceeds pi";
        throw InputError(msg.str());
    }
}

Rotation::Rotation(const Mat3& r, double tol) : r_(r) {
    if (!r.allFinite()) {
        throw InputError("rotation matrix is not finite");
    }
    const double orth = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (orth > tol) {
        std::ostringstream msg;
        msg << "matrix is not orthogonal (|R^T R - 1| = " << orth << ")";
        throw InputError(msg.str());
    }
    const double det = r.determinant();
    if (std::abs(det - 1.0) > tol) {
        std::ostringstream msg;
        msg << "matrix is not a proper rotation (det = " << det << ")";
        throw InputError(msg.str());
    }
}

Rotation Rotation::inverse() const { return Rotation(r_.transpose(), Unchecked{}); }

Rotation Rotation::operator*(const Rotation& other) const {
    return Rotation(r_ * other.r_, Unchecked{});
}

Mat3 generator(int axis) {
    if (axis < 1 || axis > 3) {
        throw InputError("generator axis index must be 1, 2 or 3");
    }
    return hat(Vec3::Unit(axis - 1));
}

Mat3 hat(const Vec3& w) {
    Mat3 a;
    a << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
         -w.y(), w.x(), 0.0;
    return a;
}

Vec3 vee(const Mat3& a) {
    return Vec3(0.5 * (a(2, 1) - a(1, 2)), 0.5 * (a(0, 2) - a(2, 0)), 0.5 * (a(1, 0) - a(0, 1)));
}

Rotation exp_map(const Orientation& omega) {
    const Vec3& w = omega.vector();
    const double theta = w.norm();
    const double t2 = theta * theta;
    double a;  // sin(theta) / theta
    double b;  // (1 - cos(theta)) / theta^2
    if (theta < kSeriesAngle) {
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    } else {
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / t2;
    }
    const Mat3 k = hat(w);
    return Rotation(Mat3::Identity() + a * k + b * k * k, Rotation::Unchecked{});
}

Rotation exp_map(const Vec3& omega) { return exp_map(Orientation(omega)); }

Orientation log_map(const Rotation& rot) {
    const Mat3& r = rot.matrix();
    const Vec3 v = vee(r);  // sin(theta) * axis
    const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
    const double s = v.norm();
    const double theta = std::atan2(s, c);

    if (theta < kSeriesAngle) {
        return Orientation(v * (1.0 + theta * theta / 6.0));
    }
    if (c > -0.9) {
        return Orientation(v * (theta / s));
    }

    // Near pi: sin(theta) carries no usable axis information, so read the
    // axis off the symmetric part, R + R^T = 2 cos I + 2 (1 - cos) k k^T.
    const Mat3 kk = (0.5 * (r + r.transpose()) - c * Mat3::Identity()) / (1.0 - c);
    Eigen::Index col = 0;
    kk.diagonal().maxCoeff(&col);
    Vec3 axis = kk.col(col) / std::sqrt(std::max(kk(col, col), 0.0));
    axis.normalize();
    if (axis.dot(v) < 0.0) {
        axis = -axis;
    }
    return Orientation(axis * std::min(theta, kPi));
}

KillingFrame killing_frame(const Vec3& omega, double boundary_eps) {
    const double theta = omega.norm();
    if (!(theta < kPi - boundary_eps)) {
        std::ostringstream msg;
        msg << "Killing frame is singular near the ball boundary (angle " << theta << ")";
        throw InputError(msg.str());
    }
    const double t2 = theta * theta;
    double b;  // (1 - cos) / theta^2
    double c;  // (theta - sin) / theta^3
    double d;  // 1/theta^2 - (1 + cos) / (2 theta sin)
    if (theta < kKillingSeriesAngle) {
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
        c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
        d = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
    } else {
        const double sn = std::sin(theta);
        const double cs = std::cos(theta);
        b = (1.0 - cs) / t2;
        c = (theta - sn) / (t2 * theta);
        d = 1.0 / t2 - (1.0 + cs) / (2.0 * theta * sn);
    }
    const Mat3 k = hat(omega);
    const Mat3 k2 = k * k;
    KillingFrame frame;
    frame.n = Mat3::Identity() - b * k + c * k2;
    frame.m = Mat3::Identity() + 0.5 * k + d * k2;
    return frame;
}

Vec3 rotate_observable(const Rotation& r, const Vec3& a) {
    const Mat3& m = r.matrix();
    Vec3 out = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
            out[k] += m(k, j) * a[j];
        }
    }
    return out;
}

Vec3 wrap_to_ball(const Vec3& x) {
    const double theta = x.norm();
    if (theta <= kPi) {
        return x;
    }
    double reduced = std::fmod(theta, 2.0 * kPi);
    if (reduced > kPi) {
        reduced -= 2.0 * kPi;
    }
    return x * (reduced / theta);
}

}  // namespace eckart::so3
