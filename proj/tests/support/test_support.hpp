#pragma once

#include "eckart/frames.hpp"
#include "eckart/lie_so3.hpp"
#include "eckart/modes.hpp"
#include "eckart/molecule.hpp"
#include "eckart/state.hpp"

#include <Eigen/Geometry>

#include <random>
#include <string>

namespace eckart::test {

inline std::string data_path(const std::string& name) { return std::string(ECKART_TEST_DATA) + "/" + name; }

inline Molecule three_unit_masses() {
    return Molecule("triangle", {{1.0, Vec3(1, 0, 0)}, {1.0, Vec3(-1, 0, 0)}, {1.0, Vec3(0, 1, 0)}});
}

inline Molecule square_four() {
    return Molecule("square", {{1.0, Vec3(1, 0, 0)}, {1.0, Vec3(-1, 0, 0)}, {1.0, Vec3(0, 1, 0)}, {1.0, Vec3(0, -1, 0)}});
}

inline Molecule raw_water(int electrons = 2) {
    return Molecule("water",
                    {{15.994915, Vec3(0.0, 0.0, 0.1173)},
                     {1.007825, Vec3(0.0, 0.7572, -0.4692)},
                     {1.007825, Vec3(0.0, -0.7572, -0.4692)}},
                    electrons, 0.00054858);
}

/// Asymmetric five-nucleus molecule with optional electrons.
inline Molecule raw_halomethane(int electrons = 0, double electron_mass = 0.00054858) {
    return Molecule("halomethane",
                    {{12.0, Vec3(0.0, 0.0, 0.0)},
                     {1.008, Vec3(0.0, 0.0, 1.09)},
                     {18.998, Vec3(1.30, 0.0, -0.45)},
                     {35.45, Vec3(-0.88, 1.50, -0.60)},
                     {79.904, Vec3(-0.95, -1.62, -0.70)}},
                    electrons, electron_mass);
}

inline Vec3 random_vector(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    return Vec3(g(rng), g(rng), g(rng));
}

/// Uniform point of the ball of the given radius.
inline Vec3 random_in_ball(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        const Vec3 v(u(rng), u(rng), u(rng));
        if (v.squaredNorm() <= 1.0) {
            return radius * v;
        }
    }
}

/// Rotation built with Eigen's quaternion machinery, independent of exp_map.
inline Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    q.normalize();
    return q.toRotationMatrix();
}

/// Rotation about omega via Eigen::AngleAxis; accepts any norm.
inline Mat3 angle_axis(const Vec3& omega) {
    const double theta = omega.norm();
    if (theta == 0.0) {
        return Mat3::Identity();
    }
    return Eigen::AngleAxisd(theta, omega / theta).toRotationMatrix();
}

/// Truncated power series of exp(a).
inline Mat3 series_exp(const Mat3& a, int terms = 30) {
    Mat3 sum = Mat3::Identity();
    Mat3 term = Mat3::Identity();
    for (int k = 1; k < terms; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

inline Mat3 cross_matrix(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

/// Inertia tensor by explicit loops over nuclei and axes.
inline Mat3 brute_inertia(const Molecule& mol) {
    Mat3 t = Mat3::Zero();
    for (const auto& n : mol.nuclei()) {
        for (int k = 0; k < 3; ++k) {
            for (int l = 0; l < 3; ++l) {
                t(k, l) += n.mass * ((k == l ? n.position.squaredNorm() : 0.0) - n.position[k] * n.position[l]);
            }
        }
    }
    return t;
}

inline double max_diff(const Vec3List& a, const Vec3List& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, (a[i] - b[i]).cwiseAbs().maxCoeff());
    }
    return m;
}

inline double config_diff(const Configuration& a, const Configuration& b) {
    return std::max({max_diff(a.nuclear_positions, b.nuclear_positions), max_diff(a.nuclear_momenta, b.nuclear_momenta),
                     max_diff(a.electron_positions, b.electron_positions),
                     max_diff(a.electron_momenta, b.electron_momenta)});
}

/// Laboratory configuration: equilibrium plus a small arbitrary displacement,
/// rigidly rotated and shifted, with random momenta and electrons.
inline Configuration random_configuration(const Molecule& mol, std::mt19937_64& rng, double displacement = 0.05) {
    const Mat3 r = random_rotation(rng);
    const Vec3 shift = random_vector(rng);
    Configuration cfg;
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        cfg.nuclear_positions.push_back(r * (mol.equilibrium(mu) + random_vector(rng, displacement)) + shift);
        cfg.nuclear_momenta.push_back(random_vector(rng, 0.5));
    }
    for (int nu = 0; nu < mol.electron_count(); ++nu) {
        cfg.electron_positions.push_back(random_vector(rng) + shift);
        cfg.electron_momenta.push_back(random_vector(rng, 0.1));
    }
    return cfg;
}

/// Random internal state with small mode amplitudes.
inline InternalState random_internal_state(const Molecule& mol, const ModeBasis& basis, std::mt19937_64& rng,
                                           double amplitude = 0.05) {
    std::normal_distribution<double> g(0.0, 1.0);
    InternalState s;
    const auto k = static_cast<Eigen::Index>(basis.mode_count());
    s.Q = VecX(k);
    s.P = VecX(k);
    for (Eigen::Index a = 0; a < k; ++a) {
        s.Q[a] = amplitude * g(rng);
        s.P[a] = g(rng);
    }
    for (int nu = 0; nu < mol.electron_count(); ++nu) {
        s.q.push_back(random_vector(rng));
        s.p.push_back(random_vector(rng, 0.1));
    }
    s.angular_velocity = random_vector(rng, 0.1);
    s.orientation = so3::Orientation(random_in_ball(rng, 3.0));
    s.com_position = random_vector(rng);
    s.com_momentum = random_vector(rng);
    return s;
}

}  // namespace eckart::test
