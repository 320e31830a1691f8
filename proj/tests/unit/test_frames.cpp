#include "eckart/frames.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace eckart;

namespace {

struct Fixture {
    Molecule mol;
    ModeBasis basis;
    InertiaModel inertia;
};

Fixture make(const Molecule& raw) {
    Molecule mol = prepare_equilibrium(raw);
    ModeBasis basis = build_modes(mol, 0);
    InertiaModel inertia = build_inertia(mol, basis);
    return {mol, basis, inertia};
}

Vec3 eckart_sum(const Molecule& mol, const Mat3& r, const Vec3List& relative) {
    Vec3 s = Vec3::Zero();
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        s += mol.mass(mu) * mol.equilibrium(mu).cross(r.transpose() * relative[mu]);
    }
    return s;
}

double eckart_scale(const Molecule& mol, const Vec3List& relative) {
    double s = 0.0;
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        s += mol.mass(mu) * mol.equilibrium(mu).norm() * relative[mu].norm();
    }
    return s;
}

Vec3List rotated(const Mat3& r, const Vec3List& v) {
    Vec3List out;
    for (const auto& x : v) {
        out.push_back(r * x);
    }
    return out;
}

}  // namespace

TEST(ComSplit, SumsVanish) {
    const Fixture f = make(test::raw_water());
    std::mt19937_64 rng(20);
    for (int trial = 0; trial < 20; ++trial) {
        const Configuration cfg = test::random_configuration(f.mol, rng);
        const ComSplit split = com_split(f.mol, cfg);
        Vec3 pos = Vec3::Zero();
        Vec3 mom = Vec3::Zero();
        for (std::size_t mu = 0; mu < 3; ++mu) {
            pos += f.mol.mass(mu) * split.relative.nuclear_positions[mu];
            mom += split.relative.nuclear_momenta[mu];
        }
        for (std::size_t nu = 0; nu < 2; ++nu) {
            pos += f.mol.electron_mass() * split.relative.electron_positions[nu];
            mom += split.relative.electron_momenta[nu];
        }
        EXPECT_LT(pos.norm(), 1e-10);
        EXPECT_LT(mom.norm(), 1e-10);
        const Configuration back = add_com(f.mol, split.relative, split.position, split.momentum);
        EXPECT_LT(test::config_diff(back, cfg), 1e-12);
    }
}

TEST(ComSplit, RestingSymmetricConfiguration) {
    const Molecule mol = prepare_equilibrium(test::square_four());
    Configuration cfg;
    for (const auto& n : mol.nuclei()) {
        cfg.nuclear_positions.push_back(n.position);
        cfg.nuclear_momenta.push_back(Vec3::Zero());
    }
    const ComSplit split = com_split(mol, cfg);
    EXPECT_EQ(split.momentum, Vec3::Zero());
    Vec3 total = Vec3::Zero();
    for (const auto& p : split.relative.nuclear_momenta) {
        total += p;
    }
    EXPECT_EQ(total, Vec3::Zero());
    EXPECT_LT(split.position.norm(), 1e-15);
}

TEST(ComSplit, BoostInvariance) {
    const Fixture f = make(test::raw_water());
    std::mt19937_64 rng(21);
    const Configuration cfg = test::random_configuration(f.mol, rng);
    const Vec3 v(0.3, -0.7, 1.1);
    Configuration boosted = cfg;
    for (std::size_t mu = 0; mu < 3; ++mu) {
        boosted.nuclear_momenta[mu] += f.mol.mass(mu) * v;
    }
    for (std::size_t nu = 0; nu < 2; ++nu) {
        boosted.electron_momenta[nu] += f.mol.electron_mass() * v;
    }
    const ComSplit a = com_split(f.mol, cfg);
    const ComSplit b = com_split(f.mol, boosted);
    EXPECT_LT(test::max_diff(a.relative.nuclear_momenta, b.relative.nuclear_momenta), 1e-12);
    EXPECT_LT(test::max_diff(a.relative.electron_momenta, b.relative.electron_momenta), 1e-12);
    EXPECT_LT((b.momentum - a.momentum - f.mol.masses().total * v).norm(), 1e-12);
}

TEST(ComSplit, RejectsMismatchedConfiguration) {
    const Fixture f = make(test::raw_water());
    Configuration cfg;
    cfg.nuclear_positions.assign(2, Vec3::Zero());
    cfg.nuclear_momenta.assign(2, Vec3::Zero());
    EXPECT_THROW(com_split(f.mol, cfg), InputError);
}

TEST(SolveEckart, RecoversRigidRotation) {
    const Fixture f = make(test::raw_halomethane());
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const Mat3 s = test::random_rotation(rng);
        Vec3List rel;
        for (const auto& n : f.mol.nuclei()) {
            rel.push_back(s * n.position);
        }
        const EckartFrame frame = solve_eckart(f.mol, rel);
        EXPECT_LT((frame.rotation.matrix() - s).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((so3::exp_map(frame.orientation).matrix() - frame.rotation.matrix()).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_FALSE(frame.degenerate);
    }
}

TEST(SolveEckart, IdentityAtEquilibrium) {
    const Fixture f = make(test::raw_halomethane());
    Vec3List rel;
    for (const auto& n : f.mol.nuclei()) {
        rel.push_back(n.position);
    }
    const EckartFrame frame = solve_eckart(f.mol, rel);
    EXPECT_LT((frame.rotation.matrix() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(frame.orientation.vector().norm(), 1e-14);
}

TEST(SolveEckart, PerturbedConfigurationsSatisfyRotationEquation) {
    const Fixture f = make(test::raw_halomethane());
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat3 s = test::random_rotation(rng);
        const double amp = 0.02;
        Vec3List rel;
        for (const auto& n : f.mol.nuclei()) {
            rel.push_back(s * (n.position + test::random_vector(rng, amp)));
        }
        const EckartFrame frame = solve_eckart(f.mol, rel);
        const double residual = eckart_sum(f.mol, frame.rotation.matrix(), rel).norm();
        EXPECT_LT(residual / eckart_scale(f.mol, rel), 1e-10);
        EXPECT_NEAR(frame.relative_residual, residual / eckart_scale(f.mol, rel), 1e-12);
        // The frame stays within second order of the applied rotation.
        EXPECT_LT((frame.rotation.matrix() - s).norm(), 20 * amp);
    }
}

TEST(SolveEckart, MaximizesOverlap) {
    const Fixture f = make(test::raw_water(0));
    std::mt19937_64 rng(24);
    Vec3List rel;
    for (const auto& n : f.mol.nuclei()) {
        rel.push_back(n.position + test::random_vector(rng, 0.05));
    }
    const Mat3 r = solve_eckart(f.mol, rel).rotation.matrix();
    const auto overlap = [&](const Mat3& m) {
        double s = 0.0;
        for (std::size_t mu = 0; mu < 3; ++mu) {
            s += f.mol.mass(mu) * f.mol.equilibrium(mu).dot(m.transpose() * rel[mu]);
        }
        return s;
    };
    const double best = overlap(r);
    for (int trial = 0; trial < 200; ++trial) {
        const Mat3 other = r * test::angle_axis(test::random_vector(rng, 0.3));
        EXPECT_LE(overlap(other), best + 1e-12);
    }
}

TEST(SolveEckart, Equivariant) {
    const Fixture f = make(test::raw_halomethane());
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 50; ++trial) {
        Vec3List rel;
        for (const auto& n : f.mol.nuclei()) {
            rel.push_back(n.position + test::random_vector(rng, 0.03));
        }
        const Mat3 t = test::random_rotation(rng);
        const Mat3 r = solve_eckart(f.mol, rel).rotation.matrix();
        const Mat3 tr = solve_eckart(f.mol, rotated(t, rel)).rotation.matrix();
        EXPECT_LT((tr - t * r).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(SolveEckart, Errors) {
    const Fixture f = make(test::raw_halomethane());
    EXPECT_THROW(solve_eckart(f.mol, Vec3List(5, Vec3::Zero())), InputError);
    EXPECT_THROW(solve_eckart(f.mol, Vec3List(4, Vec3::Ones())), InputError);
    std::mt19937_64 rng(26);
    Vec3List rel;
    for (const auto& n : f.mol.nuclei()) {
        rel.push_back(n.position + test::random_vector(rng, 0.05));
    }
    EXPECT_THROW(solve_eckart(f.mol, rel, FrameTolerances{1e-300}), NumericalError);
}

TEST(SolveEckart, FlagsDegenerateOverlap) {
    // Every nucleus at the origin except one: the overlap only fixes one axis.
    const Fixture f = make(test::raw_halomethane());
    Vec3List rel(5, Vec3::Zero());
    rel[0] = Vec3(0.0, 0.0, 1e-3);
    try {
        const EckartFrame frame = solve_eckart(f.mol, rel);
        EXPECT_TRUE(frame.degenerate);
    } catch (const NumericalError&) {
        SUCCEED();
    }
}

TEST(ToRest, IdentityAndInverseAction) {
    const Fixture f = make(test::raw_water());
    std::mt19937_64 rng(27);
    const Configuration rest = com_split(f.mol, test::random_configuration(f.mol, rng)).relative;
    EckartFrame identity;
    EXPECT_LT(test::config_diff(to_rest(identity, rest), rest), 1e-15);

    const so3::Rotation s(test::random_rotation(rng));
    const Configuration relative = from_rest(s, rest);
    EckartFrame frame;
    frame.rotation = s;
    const Configuration back = to_rest(frame, relative);
    EXPECT_LT(test::config_diff(back, rest), 1e-12);
    for (std::size_t mu = 0; mu < 3; ++mu) {
        EXPECT_NEAR(relative.nuclear_positions[mu].norm(), rest.nuclear_positions[mu].norm(), 1e-12);
        EXPECT_NEAR(relative.nuclear_momenta[mu].norm(), rest.nuclear_momenta[mu].norm(), 1e-12);
    }
}

TEST(ToRest, RestSumsVanish) {
    const Fixture f = make(test::raw_water());
    std::mt19937_64 rng(28);
    for (int trial = 0; trial < 20; ++trial) {
        const Configuration cfg = test::random_configuration(f.mol, rng);
        const ComSplit split = com_split(f.mol, cfg);
        const EckartFrame frame = solve_eckart(f.mol, split.relative.nuclear_positions);
        const Configuration rest = to_rest(frame, split.relative);
        Vec3 pos = Vec3::Zero();
        Vec3 mom = Vec3::Zero();
        for (std::size_t mu = 0; mu < 3; ++mu) {
            pos += f.mol.mass(mu) * rest.nuclear_positions[mu];
            mom += rest.nuclear_momenta[mu];
        }
        for (std::size_t nu = 0; nu < 2; ++nu) {
            pos += f.mol.electron_mass() * rest.electron_positions[nu];
            mom += rest.electron_momenta[nu];
        }
        EXPECT_LT(pos.norm(), 1e-10);
        EXPECT_LT(mom.norm(), 1e-10);
    }
}

TEST(AMatrix, SingleElectron) {
    const Molecule mol = prepare_equilibrium(test::raw_water(1));
    const AMatrix a = a_matrix(mol);
    ASSERT_EQ(a.a.rows(), 1);
    const MassSummary m = mol.masses();
    EXPECT_NEAR(a.a(0, 0), std::sqrt(m.nuclear / m.total), 1e-15);
}

TEST(AMatrix, InverseIdentity) {
    for (int n : {1, 2, 3, 7}) {
        for (double me : {1e-6, 5.4858e-4, 1.0, 30.0}) {
            const Molecule mol = prepare_equilibrium(test::raw_halomethane(n, me));
            const AMatrix a = a_matrix(mol);
            const auto dim = static_cast<Eigen::Index>(n);
            EXPECT_LT((a.a * a.a_inv - MatX::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-12);
            const MassSummary m = mol.masses();
            const double coeff = (std::sqrt(m.nuclear / m.total) - 1.0) / n;
            const double coeff_inv = (std::sqrt(m.total / m.nuclear) - 1.0) / n;
            EXPECT_NEAR(a.a(0, dim - 1), dim > 1 ? coeff : 1.0 + coeff, 1e-15);
            EXPECT_NEAR(a.a_inv(dim - 1, dim - 1), 1.0 + coeff_inv, 1e-15);
        }
    }
}

TEST(AMatrix, LightElectronLimit) {
    const Molecule mol = prepare_equilibrium(test::raw_halomethane(3, 1e-9));
    const AMatrix a = a_matrix(mol);
    const double bound = 3 * 1e-9 / mol.masses().nuclear;
    EXPECT_LT((a.a - MatX::Identity(3, 3)).cwiseAbs().maxCoeff(), bound);
    // Series: sqrt(M / (M + n m)) - 1 = -n m / (2 M) + O(m^2).
    EXPECT_NEAR(a.a(0, 1), -0.5 * 1e-9 / mol.masses().nuclear, 1e-16);
}

TEST(AMatrix, NoElectronsGivesEmptyMatrices) {
    const AMatrix a = a_matrix(prepare_equilibrium(test::raw_water(0)));
    EXPECT_EQ(a.a.size(), 0);
    EXPECT_EQ(a.a_inv.size(), 0);
}

TEST(ExtractInternal, EquilibriumIsFixedPoint) {
    const Fixture f = make(test::raw_water(0));
    Configuration rest;
    for (const auto& n : f.mol.nuclei()) {
        rest.nuclear_positions.push_back(n.position);
        rest.nuclear_momenta.push_back(Vec3::Zero());
    }
    const InternalState s = extract_internal(f.mol, f.basis, f.inertia, EckartFrame{}, rest);
    EXPECT_LT(s.Q.cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(s.P.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.angular_velocity, Vec3::Zero());
    EXPECT_EQ(s.angular_momentum, Vec3::Zero());
}

TEST(ExtractInternal, ModeDisplacementGivesUnitAmplitude) {
    const Fixture f = make(test::raw_halomethane());
    const double c = 0.03;
    for (std::size_t beta = 0; beta < f.basis.mode_count(); ++beta) {
        Configuration rest;
        for (std::size_t mu = 0; mu < 5; ++mu) {
            rest.nuclear_positions.push_back(f.mol.equilibrium(mu) + c * f.basis.vec(mu, beta) / std::sqrt(f.mol.mass(mu)));
            rest.nuclear_momenta.push_back(Vec3::Zero());
        }
        const InternalState s = extract_internal(f.mol, f.basis, f.inertia, EckartFrame{}, rest);
        for (std::size_t alpha = 0; alpha < f.basis.mode_count(); ++alpha) {
            EXPECT_NEAR(s.Q[static_cast<Eigen::Index>(alpha)], alpha == beta ? c : 0.0, 1e-10);
        }
    }
}

TEST(ExtractInternal, RigidRotationVelocity) {
    const Fixture f = make(test::raw_halomethane());
    const Vec3 omega0(0.2, -0.1, 0.4);
    Configuration rest;
    for (std::size_t mu = 0; mu < 5; ++mu) {
        rest.nuclear_positions.push_back(f.mol.equilibrium(mu));
        rest.nuclear_momenta.push_back(f.mol.mass(mu) * omega0.cross(f.mol.equilibrium(mu)));
    }
    const InternalState s = extract_internal(f.mol, f.basis, f.inertia, EckartFrame{}, rest);
    EXPECT_LT((s.angular_velocity - omega0).norm(), 1e-10);
    EXPECT_LT(s.P.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Reconstruct, ZeroStateGivesEquilibrium) {
    const Fixture f = make(test::raw_water());
    InternalState s;
    s.Q = VecX::Zero(3);
    s.P = VecX::Zero(3);
    s.q.assign(2, Vec3::Zero());
    s.p.assign(2, Vec3::Zero());
    const Configuration cfg = reconstruct(f.mol, f.basis, s);
    for (std::size_t mu = 0; mu < 3; ++mu) {
        EXPECT_LT((cfg.nuclear_positions[mu] - f.mol.equilibrium(mu)).norm(), 1e-15);
    }
    for (const auto& r : cfg.electron_positions) {
        EXPECT_EQ(r, Vec3::Zero());
    }
}

TEST(Reconstruct, RoundTrip) {
    for (int electrons : {0, 2}) {
        const Fixture f = make(test::raw_water(electrons));
        std::mt19937_64 rng(29);
        for (int trial = 0; trial < 100; ++trial) {
            const Configuration cfg = test::random_configuration(f.mol, rng);
            const FrameAnalysis a = analyze(f.mol, f.basis, f.inertia, cfg);
            EXPECT_LT(test::config_diff(reconstruct(f.mol, f.basis, a.state), cfg), 1e-9);
        }
    }
}

TEST(Reconstruct, RejectsMismatchedState) {
    const Fixture f = make(test::raw_water());
    InternalState s;
    s.Q = VecX::Zero(2);
    s.P = VecX::Zero(2);
    EXPECT_THROW(reconstruct(f.mol, f.basis, s), InputError);
}

TEST(Analyze, InvariantUnderTranslationAndBoost) {
    const Fixture f = make(test::raw_water());
    std::mt19937_64 rng(30);
    const Configuration cfg = test::random_configuration(f.mol, rng);
    Configuration moved = cfg;
    const Vec3 shift(5.0, -2.0, 1.0);
    const Vec3 v(0.1, 0.2, -0.3);
    for (std::size_t mu = 0; mu < 3; ++mu) {
        moved.nuclear_positions[mu] += shift;
        moved.nuclear_momenta[mu] += f.mol.mass(mu) * v;
    }
    for (std::size_t nu = 0; nu < 2; ++nu) {
        moved.electron_positions[nu] += shift;
        moved.electron_momenta[nu] += f.mol.electron_mass() * v;
    }
    const InternalState a = analyze(f.mol, f.basis, f.inertia, cfg).state;
    const InternalState b = analyze(f.mol, f.basis, f.inertia, moved).state;
    EXPECT_LT((a.Q - b.Q).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((a.P - b.P).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(test::max_diff(a.q, b.q), 1e-10);
    EXPECT_LT(test::max_diff(a.p, b.p), 1e-10);
    EXPECT_LT((a.angular_momentum - b.angular_momentum).norm(), 1e-10);
}
