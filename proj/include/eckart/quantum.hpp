#pragma once

#include "eckart/grids.hpp"
#include "eckart/lie_so3.hpp"
#include "eckart/types.hpp"

#include <complex>
#include <functional>
#include <memory>

namespace eckart::quantum {

using Complex = std::complex<double>;
using VecC = Eigen::VectorXcd;
using LineFunction = std::function<Complex(double)>;
using So3Function = std::function<Complex(const Vec3&)>;

/// Amplitude magnitude allowed at the ends of a line grid.
inline constexpr double kDecayTol = 1e-8;
/// Allowed deviation of the weighted norm from one.
inline constexpr double kNormTol = 1e-8;
/// Haar mass allowed in the boundary shell of the orientation ball.
inline constexpr double kBoundaryMassTol = 1e-8;

enum class Stencil { second, fourth };

/// Central difference with zero extension past the ends.
VecC central_difference(const VecC& f, double step, Stencil stencil = Stencil::fourth);

/// Samples on a LineGrid. Operator results share the type but are generally
/// not normalized.
class LineWavefunction {
public:
    LineWavefunction(std::shared_ptr<const LineGrid> grid, VecC values);

    /// Samples f on the grid, normalized unless `normalize` is false.
    static LineWavefunction sample(std::shared_ptr<const LineGrid> grid, const LineFunction& f, bool normalize = true);

    const LineGrid& grid() const { return *grid_; }
    const std::shared_ptr<const LineGrid>& grid_ptr() const { return grid_; }
    const VecC& values() const { return values_; }

    double norm2() const;
    /// Weighted inner product <this, other>.
    Complex inner(const VecC& other) const;
    bool is_normalized(double tol = kNormTol) const { return std::abs(norm2() - 1.0) <= tol; }
    /// Largest amplitude magnitude at the two end points.
    double edge_amplitude() const;

private:
    std::shared_ptr<const LineGrid> grid_;
    VecC values_;
};

/// Multiplication by x. Throws InputError for an unnormalized state.
LineWavefunction position_op(const LineWavefunction& psi);

/// -i hbar d/dx. Throws InputError for an unnormalized state or one that has
/// not decayed below kDecayTol at the grid ends.
LineWavefunction momentum_op(const LineWavefunction& psi, double hbar, Stencil stencil = Stencil::fourth);

struct LineCommutatorCheck {
    double residual = 0.0;          // on the given grid
    double refined_residual = 0.0;  // with the step halved
    double order = 0.0;             // log2(residual / refined_residual)
    std::size_t points = 0;
};

/// Residual of [P, Q] psi + i hbar psi with second-order momentum stencils,
/// relative to hbar max|psi|, over nodes at least two steps from either end.
/// Repeated on the refined grid to measure the convergence order.
LineCommutatorCheck position_momentum_commutator(const LineGrid& grid, const LineFunction& state, double hbar);

/// Weighted dispersion from samples of psi and A psi for a Hermitian A:
/// <A> = Re <psi, A psi>, <A^2> = |A psi|^2. Variances in (-1e-12, 0) are
/// clamped to zero; anything lower throws NumericalError.
double dispersion_from_samples(const VecC& psi, const VecC& a_psi, const std::vector<double>& weights);

enum class LineObservable { position, momentum };

double dispersion(const LineWavefunction& psi, LineObservable op, double hbar);

/// Orientation wavefunction: a callable on axis-angle vectors, so finite
/// differences can step off the grid, plus its samples at the grid nodes.
class So3Wavefunction {
public:
    /// Normalizes the callable against the grid's Haar weights.
    So3Wavefunction(std::shared_ptr<const So3Grid> grid, So3Function f);

    const So3Grid& grid() const { return *grid_; }
    const std::shared_ptr<const So3Grid>& grid_ptr() const { return grid_; }
    const So3Function& function() const { return fn_; }
    const VecC& values() const { return values_; }

    double norm2() const;
    /// Haar mass of |psi|^2 in the grid's boundary shell.
    double boundary_mass() const;

private:
    std::shared_ptr<const So3Grid> grid_;
    So3Function fn_;
    VecC values_;
};

struct So3OperatorOptions {
    double hbar = 1.0;
    double step = 1e-3;  // finite-difference step in omega-space
    /// Skip the boundary-mass gate (for demonstrating the wrap hazard).
    bool allow_boundary = false;
};

/// sinc(|omega|/2); its square is proportional to the Haar density.
double haar_amplitude(const Vec3& omega);

/// Multiplication by the canonical coordinate omega^k (0-based k), taken
/// from the wrapped vector so it jumps across the cyclic boundary.
So3Function position_function(const So3Function& f, int k);

/// n_(j)(omega) . L in its Haar-Hermitian form -i hbar s^-1 d/domega^j (s f),
/// s = haar_amplitude. Its commutator with omega^k equals that of -i hbar d/domega^j.
So3Function body_angmom_function(const So3Function& f, int j, const So3OperatorOptions& opts);

/// Component L_k = sum_j m^(j)_k (n_(j) . L) = -i hbar sum_j m(j, k) df/domega^j.
So3Function angmom_function(const So3Function& f, int k, const So3OperatorOptions& opts);

/// Samples of op(psi) at the grid nodes. Throws InputError when psi carries
/// boundary mass of at least kBoundaryMassTol unless opts.allow_boundary.
VecC position_op(const So3Wavefunction& psi, int k, const So3OperatorOptions& opts = {});
VecC angmom_op(const So3Wavefunction& psi, int j, const So3OperatorOptions& opts = {});
VecC total_angmom_op(const So3Wavefunction& psi, int k, const So3OperatorOptions& opts = {});

struct So3CommutatorResiduals {
    double body = 0.0;      // [n_(j) . L, omega^k] + i hbar delta_jk
    double lab = 0.0;       // [L_k, omega^j] + i hbar m^(j)_k
    double angvel = 0.0;    // [Omega^j, omega^k] + i hbar (I0^-1 m^(k))^j
    double boundary_mass = 0.0;
};

/// Residuals maximized over index pairs and grid nodes, each relative to
/// hbar max|psi| (the angular-velocity one additionally divided by the
/// largest entry of I0^-1). Throws InputError for a singular or indefinite i0.
So3CommutatorResiduals so3_commutator_residuals(const So3Wavefunction& psi, const Mat3& i0,
                                                const So3OperatorOptions& opts = {});

/// Angular-velocity part of so3_commutator_residuals.
double angvel_commutator_check(const Mat3& i0, const So3Wavefunction& psi, const So3OperatorOptions& opts = {});

enum class So3Observable { position, body_angmom, angmom };

double dispersion(const So3Wavefunction& psi, So3Observable op, int index, const So3OperatorOptions& opts = {});

}  // namespace eckart::quantum
