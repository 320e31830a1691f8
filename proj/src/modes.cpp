#include "eckart/modes.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace eckart {

namespace {

constexpr double kRankTolerance = 1e-8;

Eigen::Index dim(const Molecule& mol) { return 3 * static_cast<Eigen::Index>(mol.nucleus_count()); }

void check_rows(const Molecule& mol, Eigen::Index rows, const char* what) {
    if (rows != dim(mol)) {
        std::ostringstream msg;
        msg << what << " has " << rows << " rows, expected 3N = " << dim(mol);
        throw InputError(msg.str());
    }
}

// Orthonormalizes `cand` column by column against `fixed` and the columns
// already accepted (modified Gram-Schmidt, two passes). Column order is kept.
MatX orthonormalize_against(const MatX& cand, const MatX& fixed) {
    MatX out(cand.rows(), cand.cols());
    for (Eigen::Index j = 0; j < cand.cols(); ++j) {
        const double original = cand.col(j).norm();
        VecX v = cand.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index f = 0; f < fixed.cols(); ++f) {
                v -= fixed.col(f).dot(v) * fixed.col(f);
            }
            for (Eigen::Index p = 0; p < j; ++p) {
                v -= out.col(p).dot(v) * out.col(p);
            }
        }
        const double norm = v.norm();
        if (!(original > 0.0) || norm <= kRankTolerance * original) {
            std::ostringstream msg;
            msg << "mode candidates are rank deficient after projecting out translations and "
                   "rotations (column "
                << j << ")";
            throw InputError(msg.str());
        }
        out.col(j) = v / norm;
    }
    return out;
}

// Orthonormal complement of the external subspace, deterministic.
MatX internal_complement(const MatX& external) {
    const Eigen::HouseholderQR<MatX> qr(external);
    const MatX q = qr.householderQ();
    return q.rightCols(q.cols() - external.cols());
}

// Canonical basis of a degenerate eigenvector cluster: project the unit
// vectors e_0, e_1, ... onto the cluster and keep the first independent ones.
MatX canonical_cluster_basis(const MatX& w) {
    const Eigen::Index k = w.cols();
    MatX out(w.rows(), k);
    Eigen::Index chosen = 0;
    for (Eigen::Index i = 0; i < w.rows() && chosen < k; ++i) {
        VecX v = w * w.row(i).transpose();
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index p = 0; p < chosen; ++p) {
                v -= out.col(p).dot(v) * out.col(p);
            }
        }
        const double norm = v.norm();
        if (norm > 1e-3) {
            out.col(chosen++) = v / norm;
        }
    }
    return out;
}

void fix_sign(Eigen::Ref<VecX> v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    if (v[k] < 0.0) {
        v = -v;
    }
}

}  // namespace

double EckartResidual::worst() const {
    return std::max({centre_of_mass, momentum, angular_momentum, duality});
}

ModeBasis ModeBasis::from_direct(MatX direct) {
    ModeBasis basis;
    const MatX gram = direct.transpose() * direct;
    basis.x_dual = direct * gram.ldlt().solve(MatX::Identity(gram.rows(), gram.cols()));
    basis.x = std::move(direct);
    return basis;
}

MatX external_subspace(const Molecule& mol) {
    const Eigen::Index n3 = dim(mol);
    MatX ext = MatX::Zero(n3, 6);
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        const double s = std::sqrt(mol.mass(mu));
        const Eigen::Index row = 3 * static_cast<Eigen::Index>(mu);
        for (int j = 0; j < 3; ++j) {
            ext(row + j, j) = s;
            ext.block<3, 1>(row, 3 + j) = s * Vec3::Unit(j).cross(mol.equilibrium(mu));
        }
    }
    MatX out(n3, 6);
    for (Eigen::Index j = 0; j < 6; ++j) {
        const double original = ext.col(j).norm();
        VecX v = ext.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index p = 0; p < j; ++p) {
                v -= out.col(p).dot(v) * out.col(p);
            }
        }
        const double norm = v.norm();
        if (!(original > 0.0) || norm <= kRankTolerance * original) {
            throw InputError("collinear geometry: infinitesimal rotations are linearly dependent");
        }
        out.col(j) = v / norm;
    }
    return out;
}

ModeBasis build_modes(const Molecule& mol, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto k = static_cast<Eigen::Index>(mol.mode_count());
    MatX cand(dim(mol), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < cand.rows(); ++i) {
            cand(i, j) = normal(rng);
        }
    }
    return build_modes_from_candidates(mol, cand);
}

ModeBasis build_modes_from_candidates(const Molecule& mol, const MatX& candidates) {
    check_rows(mol, candidates.rows(), "mode candidate matrix");
    if (candidates.cols() != static_cast<Eigen::Index>(mol.mode_count())) {
        std::ostringstream msg;
        msg << "expected " << mol.mode_count() << " mode candidates, got " << candidates.cols();
        throw InputError(msg.str());
    }
    const MatX ext = external_subspace(mol);
    return ModeBasis::from_direct(orthonormalize_against(candidates, ext));
}

ModeBasis build_modes_from_hessian(const Molecule& mol, const MatX& hessian) {
    check_rows(mol, hessian.rows(), "Hessian");
    if (hessian.cols() != hessian.rows()) {
        throw InputError("Hessian must be square");
    }
    const double scale = std::max(hessian.cwiseAbs().maxCoeff(), 1e-300);
    if ((hessian - hessian.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw InputError("Hessian is not symmetric");
    }

    VecX inv_sqrt_mass(dim(mol));
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        inv_sqrt_mass.segment<3>(3 * static_cast<Eigen::Index>(mu)).setConstant(1.0 / std::sqrt(mol.mass(mu)));
    }
    const MatX weighted = inv_sqrt_mass.asDiagonal() * (0.5 * (hessian + hessian.transpose())) *
                          inv_sqrt_mass.asDiagonal();

    const MatX internal = internal_complement(external_subspace(mol));
    const MatX projected = internal.transpose() * weighted * internal;
    const Eigen::SelfAdjointEigenSolver<MatX> solver(projected);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on the projected Hessian");
    }
    const VecX& values = solver.eigenvalues();
    MatX modes = internal * solver.eigenvectors();

    const double cluster_tol = 1e-8 * std::max(values.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::Index start = 0;
    while (start < values.size()) {
        Eigen::Index stop = start + 1;
        while (stop < values.size() && values[stop] - values[stop - 1] <= cluster_tol) {
            ++stop;
        }
        if (stop - start == 1) {
            fix_sign(modes.col(start));
        } else {
            modes.middleCols(start, stop - start) = canonical_cluster_basis(modes.middleCols(start, stop - start));
        }
        start = stop;
    }

    ModeBasis basis = ModeBasis::from_direct(std::move(modes));
    basis.frequencies.reserve(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = values[i];
        basis.frequencies.push_back(v >= 0.0 ? std::sqrt(v) : -std::sqrt(-v));
    }
    return basis;
}

EckartResidual verify_eckart(const Molecule& mol, const ModeBasis& basis) {
    check_rows(mol, basis.x.rows(), "mode basis");
    EckartResidual res;
    Vec3 first = Vec3::Zero();
    for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
        first += mol.mass(mu) * mol.equilibrium(mu);
    }
    res.centre_of_mass = first.norm();

    for (std::size_t a = 0; a < basis.mode_count(); ++a) {
        Vec3 lin = Vec3::Zero();
        Vec3 ang = Vec3::Zero();
        for (std::size_t mu = 0; mu < mol.nucleus_count(); ++mu) {
            const double s = std::sqrt(mol.mass(mu));
            lin += s * basis.vec(mu, a);
            ang += s * mol.equilibrium(mu).cross(basis.vec(mu, a));
        }
        res.momentum = std::max(res.momentum, lin.norm());
        res.angular_momentum = std::max(res.angular_momentum, ang.norm());
    }
    if (basis.mode_count() > 0) {
        const MatX gram = basis.x.transpose() * basis.x_dual;
        res.duality = (gram - MatX::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    }
    return res;
}

MatX internal_projector(const ModeBasis& basis) { return basis.x * basis.x_dual.transpose(); }

}  // namespace eckart
