#pragma once

#include "eckart/lie_so3.hpp"
#include "eckart/types.hpp"

#include <cstddef>
#include <vector>

namespace eckart::quantum {

/// Uniform grid on [x_min, x_max] with trapezoid weights.
class LineGrid {
public:
    static constexpr std::size_t kMinPoints = 64;

    LineGrid(double x_min, double x_max, std::size_t count);

    std::size_t size() const { return count_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double step() const { return step_; }
    double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * step_; }
    double weight(std::size_t i) const { return (i == 0 || i + 1 == count_) ? 0.5 * step_ : step_; }

    /// Same interval with the step halved (2N - 1 points).
    LineGrid refined() const { return LineGrid(x_min_, x_max_, 2 * count_ - 1); }

    std::vector<double> weights() const;

private:
    double x_min_;
    double x_max_;
    std::size_t count_;
    double step_;
};

struct So3GridOptions {
    static constexpr std::size_t kMinTheta = 16;
    static constexpr std::size_t kMinDirections = 32;

    std::size_t theta_nodes = 96;
    /// Target number of directions; rounded up to the product rule 2 p^2.
    std::size_t direction_nodes = 512;
    double boundary_eps = so3::kBoundaryEpsilon;
    /// Nodes with angle above pi - boundary_shell count toward the boundary mass.
    double boundary_shell = 0.5;
};

/// Axis-angle ball |omega| < pi - eps discretized as Gauss-Legendre angles
/// times a Gauss-Legendre x trapezoid sphere rule. Weights carry the Haar
/// density (1 - cos theta) / theta^2 and sum to one.
class So3Grid {
public:
    explicit So3Grid(const So3GridOptions& options = {});

    std::size_t size() const { return nodes_.size(); }
    const Vec3& node(std::size_t i) const { return nodes_[i]; }
    double angle(std::size_t i) const { return angles_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    bool in_boundary_shell(std::size_t i) const { return angles_[i] > so3::kPi - options_.boundary_shell; }

    const So3GridOptions& options() const { return options_; }
    std::size_t direction_count() const { return directions_; }

    /// Normalized Haar density per unit omega-volume.
    static double haar_density(double theta);

private:
    So3GridOptions options_;
    std::vector<Vec3> nodes_;
    std::vector<double> angles_;
    std::vector<double> weights_;
    std::size_t directions_ = 0;
};

/// Gauss-Legendre nodes and weights mapped to [a, b].
void gauss_legendre(std::size_t n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace eckart::quantum
