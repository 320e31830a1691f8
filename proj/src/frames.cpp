#include "eckart/frames.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <cmath>
#include <sstream>

namespace eckart {

namespace {

Vec3List rotate_all(const Mat3& r, const Vec3List& v) {
    Vec3List out;
    out.reserve(v.size());
    for (const auto& x : v) {
        out.push_back(r * x);
    }
    return out;
}

Vec3List mix(const MatX& a, const Vec3List& v) {
    Vec3List out(v.size(), Vec3::Zero());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            out[i] += a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * v[j];
        }
    }
    return out;
}

Vec3 sum(const Vec3List& v) {
    Vec3 s = Vec3::Zero();
    for (const auto& x : v) {
        s += x;
    }
    return s;
}

struct Stationarity {
    Vec3 gradient;  // sum M R0 x y
    double scale;   // sum M |R0| |y|
};

Stationarity eckart_gradient(const Molecule& mol, const Mat3& r, std::span<const Vec3> relative) {
    Stationarity s{Vec3::Zero(), 0.0};
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        const Vec3 y = r.transpose() * relative[mu];
        s.gradient += mol.mass(mu) * mol.equilibrium(mu).cross(y);
        s.scale += mol.mass(mu) * mol.equilibrium(mu).norm() * y.norm();
    }
    return s;
}

}  // namespace

void Configuration::check_against(const Molecule& mol) const {
    const auto n_nuc = mol.nucleus_count();
    const auto n_el = static_cast<std::size_t>(mol.electron_count());
    if (nuclear_positions.size() != n_nuc || nuclear_momenta.size() != n_nuc) {
        std::ostringstream msg;
        msg << "configuration has " << nuclear_positions.size() << " nuclear positions and "
            << nuclear_momenta.size() << " nuclear momenta, molecule has " << n_nuc << " nuclei";
        throw InputError(msg.str());
    }
    if (electron_positions.size() != n_el || electron_momenta.size() != n_el) {
        std::ostringstream msg;
        msg << "configuration has " << electron_positions.size() << " electron positions and "
            << electron_momenta.size() << " electron momenta, molecule has " << n_el << " electrons";
        throw InputError(msg.str());
    }
}

ComSplit com_split(const Molecule& mol, const Configuration& cfg) {
    cfg.check_against(mol);
    const MassSummary masses = mol.masses();
    const double m = mol.electron_mass();

    ComSplit out;
    Vec3 weighted = Vec3::Zero();
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        weighted += mol.mass(mu) * cfg.nuclear_positions[mu];
        out.momentum += cfg.nuclear_momenta[mu];
    }
    for (std::size_t nu = 0; nu < cfg.electron_positions.size(); ++nu) {
        weighted += m * cfg.electron_positions[nu];
        out.momentum += cfg.electron_momenta[nu];
    }
    out.position = weighted / masses.total;

    Configuration& rel = out.relative;
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        rel.nuclear_positions.push_back(cfg.nuclear_positions[mu] - out.position);
        rel.nuclear_momenta.push_back(cfg.nuclear_momenta[mu] - (mol.mass(mu) / masses.total) * out.momentum);
    }
    for (std::size_t nu = 0; nu < cfg.electron_positions.size(); ++nu) {
        rel.electron_positions.push_back(cfg.electron_positions[nu] - out.position);
        rel.electron_momenta.push_back(cfg.electron_momenta[nu] - (m / masses.total) * out.momentum);
    }
    return out;
}

Configuration add_com(const Molecule& mol, const Configuration& relative, const Vec3& com_position,
                      const Vec3& com_momentum) {
    relative.check_against(mol);
    const MassSummary masses = mol.masses();
    Configuration cfg = relative;
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        cfg.nuclear_positions[mu] += com_position;
        cfg.nuclear_momenta[mu] += (mol.mass(mu) / masses.total) * com_momentum;
    }
    for (std::size_t nu = 0; nu < cfg.electron_positions.size(); ++nu) {
        cfg.electron_positions[nu] += com_position;
        cfg.electron_momenta[nu] += (mol.electron_mass() / masses.total) * com_momentum;
    }
    return cfg;
}

EckartFrame solve_eckart(const Molecule& mol, std::span<const Vec3> relative, const FrameTolerances& tol) {
    if (relative.size() != mol.nucleus_count()) {
        throw InputError("number of relative positions does not match the molecule");
    }
    bool all_zero = true;
    for (const auto& r : relative) {
        all_zero = all_zero && r.isZero(0.0);
    }
    if (all_zero) {
        throw InputError("cannot attach a frame: all relative positions are zero");
    }

    // Horn's quaternion form of max_R sum M (R R0) . R'.
    Mat3 s = Mat3::Zero();
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        s += mol.mass(mu) * mol.equilibrium(mu) * relative[mu].transpose();
    }
    Eigen::Matrix4d n;
    n << s(0, 0) + s(1, 1) + s(2, 2), s(1, 2) - s(2, 1), s(2, 0) - s(0, 2), s(0, 1) - s(1, 0),
         s(1, 2) - s(2, 1), s(0, 0) - s(1, 1) - s(2, 2), s(0, 1) + s(1, 0), s(2, 0) + s(0, 2),
         s(2, 0) - s(0, 2), s(0, 1) + s(1, 0), -s(0, 0) + s(1, 1) - s(2, 2), s(1, 2) + s(2, 1),
         s(0, 1) - s(1, 0), s(2, 0) + s(0, 2), s(1, 2) + s(2, 1), -s(0, 0) - s(1, 1) + s(2, 2);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(n);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Eckart solve: quaternion eigenproblem did not converge");
    }
    const Eigen::Vector4d values = solver.eigenvalues();
    const Eigen::Vector4d q = solver.eigenvectors().col(3);
    Mat3 r = Eigen::Quaterniond(q[0], q[1], q[2], q[3]).normalized().toRotationMatrix();

    // Newton polish on the stationarity condition, R <- R exp(delta).
    Stationarity st = eckart_gradient(mol, r, relative);
    for (int iter = 0; iter < 3 && st.gradient.norm() > 1e-15 * st.scale; ++iter) {
        Mat3 h = Mat3::Zero();
        for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
            const Vec3 y = r.transpose() * relative[mu];
            const Vec3& r0 = mol.equilibrium(mu);
            h += mol.mass(mu) * (r0.dot(y) * Mat3::Identity() - y * r0.transpose());
        }
        const Vec3 delta = h.fullPivLu().solve(st.gradient);
        if (!delta.allFinite() || delta.norm() > 1e-2) {
            break;
        }
        const Mat3 trial = r * so3::exp_map(delta).matrix();
        const Stationarity next = eckart_gradient(mol, trial, relative);
        if (next.gradient.norm() >= st.gradient.norm()) {
            break;
        }
        r = trial;
        st = next;
    }

    EckartFrame frame;
    frame.rotation = so3::Rotation(r);
    frame.orientation = so3::log_map(frame.rotation);
    frame.residual = st.gradient.norm();
    frame.relative_residual = st.scale > 0.0 ? frame.residual / st.scale : 0.0;
    frame.degenerate = values[3] - values[2] <= 1e-10 * std::max(std::abs(values[3]), 1e-300);
    if (!(frame.relative_residual <= tol.eckart)) {
        std::ostringstream msg;
        msg << "Eckart solve did not converge (relative residual " << frame.relative_residual << ")";
        throw NumericalError(msg.str());
    }
    return frame;
}

Configuration to_rest(const EckartFrame& frame, const Configuration& relative) {
    return from_rest(frame.rotation.inverse(), relative);
}

Configuration from_rest(const so3::Rotation& rotation, const Configuration& rest) {
    const Mat3& r = rotation.matrix();
    Configuration out;
    out.nuclear_positions = rotate_all(r, rest.nuclear_positions);
    out.nuclear_momenta = rotate_all(r, rest.nuclear_momenta);
    out.electron_positions = rotate_all(r, rest.electron_positions);
    out.electron_momenta = rotate_all(r, rest.electron_momenta);
    return out;
}

AMatrix a_matrix(const Molecule& mol) {
    const auto n = static_cast<Eigen::Index>(mol.electron_count());
    AMatrix out{MatX::Identity(n, n), MatX::Identity(n, n)};
    if (n == 0) {
        return out;
    }
    const MassSummary masses = mol.masses();
    const double s = std::sqrt(masses.nuclear / masses.total);
    const double nd = static_cast<double>(n);
    out.a.array() += (s - 1.0) / nd;
    out.a_inv.array() += (1.0 / s - 1.0) / nd;
    return out;
}

InternalState extract_internal(const Molecule& mol, const ModeBasis& basis, const InertiaModel& inertia,
                               const EckartFrame& frame, const Configuration& rest) {
    rest.check_against(mol);
    if (basis.nucleus_count() != mol.nucleus_count()) {
        throw InputError("mode basis and molecule disagree on the number of nuclei");
    }
    const auto n3 = static_cast<Eigen::Index>(3 * mol.nucleus_count());
    VecX displacement(n3);
    VecX scaled_momentum(n3);
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        const double s = std::sqrt(mol.mass(mu));
        const auto row = 3 * static_cast<Eigen::Index>(mu);
        displacement.segment<3>(row) = s * (rest.nuclear_positions[mu] - mol.equilibrium(mu));
        scaled_momentum.segment<3>(row) = rest.nuclear_momenta[mu] / s;
    }

    const AMatrix a = a_matrix(mol);
    InternalState state;
    state.Q = basis.x_dual.transpose() * displacement;
    state.P = basis.x.transpose() * scaled_momentum;
    state.q = mix(a.a_inv, rest.electron_positions);
    state.p = mix(a.a_inv, rest.electron_momenta);
    state.angular_momentum = rest_angmom(rest);
    state.orientation = frame.orientation;

    // Omega from the three-term decomposition with the rotational part unknown.
    const AngmomDecomposition known = decompose_angmom(inertia, basis, state);
    const Mat3 inertia_q = inertia_at_checked(inertia, state.Q);
    state.angular_velocity =
        inertia_q.fullPivLu().solve(state.angular_momentum - known.deformation - known.electronic);
    return state;
}

Configuration reconstruct_rest(const Molecule& mol, const ModeBasis& basis, const InternalState& state) {
    if (static_cast<std::size_t>(state.Q.size()) != basis.mode_count() ||
        static_cast<std::size_t>(state.P.size()) != basis.mode_count()) {
        throw InputError("internal state and mode basis disagree on the number of modes");
    }
    if (state.q.size() != static_cast<std::size_t>(mol.electron_count()) || state.p.size() != state.q.size()) {
        throw InputError("internal state and molecule disagree on the number of electrons");
    }
    const MassSummary masses = mol.masses();
    const AMatrix a = a_matrix(mol);

    Configuration rest;
    rest.electron_positions = mix(a.a, state.q);
    rest.electron_momenta = mix(a.a, state.p);
    const Vec3 electron_shift = (mol.electron_mass() / masses.nuclear) * sum(rest.electron_positions);
    const Vec3 electron_momentum = sum(rest.electron_momenta);

    const VecX displacement = basis.x * state.Q;
    const VecX momentum = basis.x_dual * state.P;
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        const double m_mu = mol.mass(mu);
        const double s = std::sqrt(m_mu);
        const auto row = 3 * static_cast<Eigen::Index>(mu);
        const Vec3& r0 = mol.equilibrium(mu);
        rest.nuclear_positions.push_back(r0 + Vec3(displacement.segment<3>(row)) / s - electron_shift);
        rest.nuclear_momenta.push_back(state.angular_velocity.cross(m_mu * r0) +
                                       s * Vec3(momentum.segment<3>(row)) -
                                       (m_mu / masses.nuclear) * electron_momentum);
    }
    return rest;
}

Configuration reconstruct(const Molecule& mol, const ModeBasis& basis, const InternalState& state) {
    const Configuration rest = reconstruct_rest(mol, basis, state);
    const Configuration relative = from_rest(so3::exp_map(state.orientation), rest);
    return add_com(mol, relative, state.com_position, state.com_momentum);
}

FrameAnalysis analyze(const Molecule& mol, const ModeBasis& basis, const InertiaModel& inertia,
                      const Configuration& cfg, const FrameTolerances& tol) {
    const ComSplit split = com_split(mol, cfg);
    FrameAnalysis out;
    out.frame = solve_eckart(mol, split.relative.nuclear_positions, tol);
    const Configuration rest = to_rest(out.frame, split.relative);
    out.state = extract_internal(mol, basis, inertia, out.frame, rest);
    out.state.com_position = split.position;
    out.state.com_momentum = split.momentum;
    return out;
}

}  // namespace eckart
