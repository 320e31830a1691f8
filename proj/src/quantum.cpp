#include "eckart/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace eckart::quantum {

namespace {

const Complex kI(0.0, 1.0);

// Offsets and weights of the fourth-order first-derivative stencil.
constexpr std::array<int, 4> kOffsets = {-2, -1, 1, 2};
constexpr std::array<double, 4> kWeights = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

Complex at(const VecC& f, Eigen::Index i) { return (i < 0 || i >= f.size()) ? Complex(0.0) : f[i]; }

void require_normalized(double norm2, const char* what) {
    if (std::abs(norm2 - 1.0) > kNormTol) {
        std::ostringstream msg;
        msg << what << " expects a normalized state (norm^2 = " << norm2 << ")";
        throw InputError(msg.str());
    }
}

void require_decay(const LineWavefunction& psi) {
    const double edge = psi.edge_amplitude();
    if (!(edge < kDecayTol)) {
        std::ostringstream msg;
        msg << "state has not decayed at the grid ends (|psi| = " << edge << "); widen the line grid";
        throw InputError(msg.str());
    }
}

VecC sample_values(const LineGrid& grid, const LineFunction& f) {
    VecC v(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = f(grid.x(i));
    }
    return v;
}

double weighted_norm2(const VecC& v, const std::vector<double>& w) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        sum += w[static_cast<std::size_t>(i)] * std::norm(v[i]);
    }
    return sum;
}

void require_interior(const So3Wavefunction& psi, const So3OperatorOptions& opts) {
    if (opts.allow_boundary) {
        return;
    }
    const double mass = psi.boundary_mass();
    if (!(mass < kBoundaryMassTol)) {
        std::ostringstream msg;
        msg << "orientation state has boundary mass " << mass
            << "; operators are unreliable near the cyclic boundary";
        throw InputError(msg.str());
    }
}

template <typename G>
Complex directional_derivative(const G& g, const Vec3& omega, int j, double h) {
    Complex d(0.0);
    for (std::size_t m = 0; m < kOffsets.size(); ++m) {
        d += kWeights[m] * g(Vec3(omega + kOffsets[m] * h * Vec3::Unit(j)));
    }
    return d / h;
}

void check_index(int i) {
    if (i < 0 || i > 2) {
        throw InputError("component index must be 0, 1 or 2");
    }
}

Mat3 checked_inverse(const Mat3& i0) {
    if ((i0 - i0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, i0.cwiseAbs().maxCoeff())) {
        throw InputError("inertia tensor must be symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Mat3> solver(i0, Eigen::EigenvaluesOnly);
    const double smallest = solver.eigenvalues()[0];
    const double largest = solver.eigenvalues()[2];
    if (!(smallest > 1e-12 * std::abs(largest)) || !(largest > 0.0)) {
        throw InputError("inertia tensor is singular or not positive definite");
    }
    return i0.inverse();
}

}  // namespace

VecC central_difference(const VecC& f, double step, Stencil stencil) {
    VecC d(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        if (stencil == Stencil::second) {
            d[i] = (at(f, i + 1) - at(f, i - 1)) / (2.0 * step);
        } else {
            Complex s(0.0);
            for (std::size_t m = 0; m < kOffsets.size(); ++m) {
                s += kWeights[m] * at(f, i + kOffsets[m]);
            }
            d[i] = s / step;
        }
    }
    return d;
}

LineWavefunction::LineWavefunction(std::shared_ptr<const LineGrid> grid, VecC values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) {
        throw InputError("line wavefunction needs a grid");
    }
    if (static_cast<std::size_t>(values_.size()) != grid_->size()) {
        throw InputError("line wavefunction sample count does not match its grid");
    }
}

LineWavefunction LineWavefunction::sample(std::shared_ptr<const LineGrid> grid, const LineFunction& f, bool normalize) {
    VecC v = sample_values(*grid, f);
    if (normalize) {
        const double n2 = weighted_norm2(v, grid->weights());
        if (!(n2 > 0.0) || !std::isfinite(n2)) {
            throw InputError("cannot normalize a vanishing or non-finite state");
        }
        v /= std::sqrt(n2);
    }
    return LineWavefunction(std::move(grid), std::move(v));
}

double LineWavefunction::norm2() const { return weighted_norm2(values_, grid_->weights()); }

Complex LineWavefunction::inner(const VecC& other) const {
    Complex sum(0.0);
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        sum += grid_->weight(static_cast<std::size_t>(i)) * std::conj(values_[i]) * other[i];
    }
    return sum;
}

double LineWavefunction::edge_amplitude() const {
    return std::max(std::abs(values_[0]), std::abs(values_[values_.size() - 1]));
}

LineWavefunction position_op(const LineWavefunction& psi) {
    require_normalized(psi.norm2(), "position operator");
    VecC v = psi.values();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] *= psi.grid().x(static_cast<std::size_t>(i));
    }
    return LineWavefunction(psi.grid_ptr(), std::move(v));
}

LineWavefunction momentum_op(const LineWavefunction& psi, double hbar, Stencil stencil) {
    require_normalized(psi.norm2(), "momentum operator");
    require_decay(psi);
    VecC v = -kI * hbar * central_difference(psi.values(), psi.grid().step(), stencil);
    return LineWavefunction(psi.grid_ptr(), std::move(v));
}

namespace {

double commutator_residual(const LineGrid& grid, const LineFunction& state, double hbar) {
    const auto shared = std::make_shared<const LineGrid>(grid);
    const LineWavefunction psi = LineWavefunction::sample(shared, state);
    require_decay(psi);
    const VecC& v = psi.values();
    VecC xv = v;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        xv[i] *= grid.x(static_cast<std::size_t>(i));
    }
    const VecC d_xv = central_difference(xv, grid.step(), Stencil::second);
    const VecC d_v = central_difference(v, grid.step(), Stencil::second);
    double worst = 0.0;
    for (Eigen::Index i = 2; i + 2 < v.size(); ++i) {
        const Complex pq = -kI * hbar * d_xv[i];
        const Complex qp = grid.x(static_cast<std::size_t>(i)) * (-kI * hbar * d_v[i]);
        worst = std::max(worst, std::abs(pq - qp + kI * hbar * v[i]));
    }
    return worst / (hbar * v.cwiseAbs().maxCoeff());
}

}  // namespace

LineCommutatorCheck position_momentum_commutator(const LineGrid& grid, const LineFunction& state, double hbar) {
    LineCommutatorCheck check;
    check.points = grid.size();
    check.residual = commutator_residual(grid, state, hbar);
    check.refined_residual = commutator_residual(grid.refined(), state, hbar);
    check.order = std::log2(check.residual / check.refined_residual);
    return check;
}

double dispersion_from_samples(const VecC& psi, const VecC& a_psi, const std::vector<double>& weights) {
    if (psi.size() != a_psi.size() || static_cast<std::size_t>(psi.size()) != weights.size()) {
        throw InputError("dispersion inputs have mismatched sizes");
    }
    require_normalized(weighted_norm2(psi, weights), "dispersion");
    Complex mean(0.0);
    double second = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double w = weights[static_cast<std::size_t>(i)];
        mean += w * std::conj(psi[i]) * a_psi[i];
        second += w * std::norm(a_psi[i]);
    }
    const double variance = second - mean.real() * mean.real();
    if (variance < -1e-12) {
        std::ostringstream msg;
        msg << "negative variance " << variance << " indicates a quadrature failure";
        throw NumericalError(msg.str());
    }
    return std::sqrt(std::max(variance, 0.0));
}

double dispersion(const LineWavefunction& psi, LineObservable op, double hbar) {
    const LineWavefunction a = op == LineObservable::position ? position_op(psi) : momentum_op(psi, hbar);
    return dispersion_from_samples(psi.values(), a.values(), psi.grid().weights());
}

So3Wavefunction::So3Wavefunction(std::shared_ptr<const So3Grid> grid, So3Function f) : grid_(std::move(grid)) {
    if (!grid_ || !f) {
        throw InputError("orientation wavefunction needs a grid and a function");
    }
    VecC v(static_cast<Eigen::Index>(grid_->size()));
    for (std::size_t i = 0; i < grid_->size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = f(grid_->node(i));
    }
    const double n2 = weighted_norm2(v, grid_->weights());
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw InputError("cannot normalize a vanishing or non-finite orientation state");
    }
    const double scale = 1.0 / std::sqrt(n2);
    values_ = v * scale;
    fn_ = [f = std::move(f), scale](const Vec3& omega) { return scale * f(omega); };
}

double So3Wavefunction::norm2() const { return weighted_norm2(values_, grid_->weights()); }

double So3Wavefunction::boundary_mass() const {
    double mass = 0.0;
    for (std::size_t i = 0; i < grid_->size(); ++i) {
        if (grid_->in_boundary_shell(i)) {
            mass += grid_->weight(i) * std::norm(values_[static_cast<Eigen::Index>(i)]);
        }
    }
    return mass;
}

double haar_amplitude(const Vec3& omega) {
    const double half = 0.5 * omega.norm();
    if (half < 1e-4) {
        return 1.0 - half * half / 6.0;
    }
    return std::sin(half) / half;
}

So3Function position_function(const So3Function& f, int k) {
    check_index(k);
    return [f, k](const Vec3& omega) { return so3::wrap_to_ball(omega)[k] * f(omega); };
}

So3Function body_angmom_function(const So3Function& f, int j, const So3OperatorOptions& opts) {
    check_index(j);
    const double hbar = opts.hbar;
    const double h = opts.step;
    return [f, j, hbar, h](const Vec3& omega) {
        const auto sf = [&f](const Vec3& w) { return haar_amplitude(w) * f(w); };
        return -kI * hbar * directional_derivative(sf, omega, j, h) / haar_amplitude(omega);
    };
}

So3Function angmom_function(const So3Function& f, int k, const So3OperatorOptions& opts) {
    check_index(k);
    const double hbar = opts.hbar;
    const double h = opts.step;
    return [f, k, hbar, h](const Vec3& omega) {
        const so3::KillingFrame frame = so3::killing_frame(omega);
        Complex sum(0.0);
        for (int j = 0; j < 3; ++j) {
            sum += frame.m(j, k) * directional_derivative(f, omega, j, h);
        }
        return -kI * hbar * sum;
    };
}

namespace {

VecC sample_at_nodes(const So3Grid& grid, const So3Function& f) {
    VecC v(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = f(grid.node(i));
    }
    return v;
}

}  // namespace

VecC position_op(const So3Wavefunction& psi, int k, const So3OperatorOptions& opts) {
    require_interior(psi, opts);
    check_index(k);
    VecC v = psi.values();
    for (std::size_t i = 0; i < psi.grid().size(); ++i) {
        v[static_cast<Eigen::Index>(i)] *= psi.grid().node(i)[k];
    }
    return v;
}

VecC angmom_op(const So3Wavefunction& psi, int j, const So3OperatorOptions& opts) {
    require_interior(psi, opts);
    return sample_at_nodes(psi.grid(), body_angmom_function(psi.function(), j, opts));
}

VecC total_angmom_op(const So3Wavefunction& psi, int k, const So3OperatorOptions& opts) {
    require_interior(psi, opts);
    return sample_at_nodes(psi.grid(), angmom_function(psi.function(), k, opts));
}

So3CommutatorResiduals so3_commutator_residuals(const So3Wavefunction& psi, const Mat3& i0,
                                                const So3OperatorOptions& opts) {
    const Mat3 inv = checked_inverse(i0);
    So3CommutatorResiduals out;
    out.boundary_mass = psi.boundary_mass();
    require_interior(psi, opts);

    const So3Grid& grid = psi.grid();
    const So3Function& f = psi.function();
    const double h = opts.step;
    const double hbar = opts.hbar;

    double body = 0.0;
    double lab = 0.0;
    double angvel = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const Vec3& omega = grid.node(n);
        const Complex psi0 = f(omega);
        const double s0 = haar_amplitude(omega);
        const so3::KillingFrame frame = so3::killing_frame(omega);

        // Stencil samples along each axis: psi, wrapped coordinates, s.
        std::array<std::array<Complex, 4>, 3> fp{};
        std::array<std::array<Vec3, 4>, 3> xp{};
        std::array<std::array<double, 4>, 3> sp{};
        for (int i = 0; i < 3; ++i) {
            for (std::size_t m = 0; m < 4; ++m) {
                const Vec3 p = omega + kOffsets[m] * h * Vec3::Unit(i);
                fp[i][m] = f(p);
                xp[i][m] = so3::wrap_to_ball(p);
                sp[i][m] = haar_amplitude(p);
            }
        }
        // d_psi[i] = D_i psi, d_xpsi[i][k] = D_i (omega^k psi), and the
        // s-weighted versions for the Hermitian body operator.
        Complex d_psi[3];
        Complex d_xpsi[3][3];
        Complex ds_psi[3];
        Complex ds_xpsi[3][3];
        for (int i = 0; i < 3; ++i) {
            d_psi[i] = ds_psi[i] = 0.0;
            for (int k = 0; k < 3; ++k) {
                d_xpsi[i][k] = ds_xpsi[i][k] = 0.0;
            }
            for (std::size_t m = 0; m < 4; ++m) {
                const Complex c = kWeights[m] * fp[i][m] / h;
                d_psi[i] += c;
                ds_psi[i] += sp[i][m] * c;
                for (int k = 0; k < 3; ++k) {
                    d_xpsi[i][k] += xp[i][m][k] * c;
                    ds_xpsi[i][k] += sp[i][m] * xp[i][m][k] * c;
                }
            }
        }

        Complex lab_comm[3][3];  // [L_l, omega^k] psi
        for (int a = 0; a < 3; ++a) {
            for (int k = 0; k < 3; ++k) {
                const Complex comm = -kI * hbar * (ds_xpsi[a][k] - omega[k] * ds_psi[a]) / s0;
                const Complex expected = a == k ? -kI * hbar * psi0 : Complex(0.0);
                body = std::max(body, std::abs(comm - expected));

                Complex l_comm(0.0);
                for (int i = 0; i < 3; ++i) {
                    l_comm += frame.m(i, a) * (d_xpsi[i][k] - omega[k] * d_psi[i]);
                }
                lab_comm[a][k] = -kI * hbar * l_comm;
            }
        }
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                // [L_j, omega^k] psi + i hbar m^(k)_j psi
                lab = std::max(lab, std::abs(lab_comm[j][k] + kI * hbar * frame.m(k, j) * psi0));
                Complex r(0.0);
                for (int l = 0; l < 3; ++l) {
                    r += inv(j, l) * (lab_comm[l][k] + kI * hbar * frame.m(k, l) * psi0);
                }
                angvel = std::max(angvel, std::abs(r));
            }
        }
    }
    const double scale = hbar * psi.values().cwiseAbs().maxCoeff();
    out.body = body / scale;
    out.lab = lab / scale;
    out.angvel = angvel / (scale * inv.cwiseAbs().maxCoeff());
    return out;
}

double angvel_commutator_check(const Mat3& i0, const So3Wavefunction& psi, const So3OperatorOptions& opts) {
    return so3_commutator_residuals(psi, i0, opts).angvel;
}

double dispersion(const So3Wavefunction& psi, So3Observable op, int index, const So3OperatorOptions& opts) {
    VecC a;
    switch (op) {
        case So3Observable::position:
            a = position_op(psi, index, opts);
            break;
        case So3Observable::body_angmom:
            a = angmom_op(psi, index, opts);
            break;
        case So3Observable::angmom:
            a = total_angmom_op(psi, index, opts);
            break;
    }
    return dispersion_from_samples(psi.values(), a, psi.grid().weights());
}

}  // namespace eckart::quantum
