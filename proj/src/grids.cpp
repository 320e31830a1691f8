#include "eckart/grids.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <sstream>

namespace eckart::quantum {

LineGrid::LineGrid(double x_min, double x_max, std::size_t count)
    : x_min_(x_min), x_max_(x_max), count_(count), step_(0.0) {
    if (count < kMinPoints) {
        std::ostringstream msg;
        msg << "line grid needs at least " << kMinPoints << " points, got " << count;
        throw InputError(msg.str());
    }
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw InputError("line grid needs a finite interval with x_max > x_min");
    }
    step_ = (x_max - x_min) / static_cast<double>(count - 1);
}

std::vector<double> LineGrid::weights() const {
    std::vector<double> w(count_);
    for (std::size_t i = 0; i < count_; ++i) {
        w[i] = weight(i);
    }
    return w;
}

void gauss_legendre(std::size_t n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
    const std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
    if (!table) {
        throw NumericalError("could not allocate a Gauss-Legendre table");
    }
    nodes.resize(n);
    weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_integration_glfixed_point(a, b, i, &nodes[i], &weights[i], table.get());
    }
}

double So3Grid::haar_density(double theta) {
    constexpr double norm = 1.0 / (4.0 * so3::kPi * so3::kPi);
    if (theta < 1e-4) {
        const double t2 = theta * theta;
        return norm * (0.5 - t2 / 24.0 + t2 * t2 / 720.0);
    }
    return norm * (1.0 - std::cos(theta)) / (theta * theta);
}

So3Grid::So3Grid(const So3GridOptions& options) : options_(options) {
    if (options.theta_nodes < So3GridOptions::kMinTheta) {
        std::ostringstream msg;
        msg << "rotation grid needs at least " << So3GridOptions::kMinTheta << " angle nodes";
        throw InputError(msg.str());
    }
    if (options.direction_nodes < So3GridOptions::kMinDirections) {
        std::ostringstream msg;
        msg << "rotation grid needs at least " << So3GridOptions::kMinDirections << " direction nodes";
        throw InputError(msg.str());
    }
    if (!(options.boundary_eps > 0.0) || !(options.boundary_eps < 1.0)) {
        throw InputError("boundary epsilon must lie in (0, 1)");
    }

    std::size_t polar = 1;
    while (2 * polar * polar < options.direction_nodes) {
        ++polar;
    }
    const std::size_t azimuth = 2 * polar;
    directions_ = polar * azimuth;

    std::vector<double> theta;
    std::vector<double> theta_w;
    gauss_legendre(options.theta_nodes, 0.0, so3::kPi - options.boundary_eps, theta, theta_w);
    std::vector<double> cos_beta;
    std::vector<double> cos_w;
    gauss_legendre(polar, -1.0, 1.0, cos_beta, cos_w);

    std::vector<Vec3> dirs;
    std::vector<double> dir_w;
    dirs.reserve(directions_);
    dir_w.reserve(directions_);
    for (std::size_t i = 0; i < polar; ++i) {
        const double sin_beta = std::sqrt(std::max(0.0, 1.0 - cos_beta[i] * cos_beta[i]));
        for (std::size_t k = 0; k < azimuth; ++k) {
            const double phi = 2.0 * so3::kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(azimuth);
            dirs.emplace_back(sin_beta * std::cos(phi), sin_beta * std::sin(phi), cos_beta[i]);
            dir_w.push_back(cos_w[i] * 2.0 * so3::kPi / static_cast<double>(azimuth));
        }
    }

    nodes_.reserve(theta.size() * dirs.size());
    double total = 0.0;
    for (std::size_t t = 0; t < theta.size(); ++t) {
        const double radial = theta_w[t] * theta[t] * theta[t] * haar_density(theta[t]);
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            nodes_.push_back(theta[t] * dirs[d]);
            angles_.push_back(theta[t]);
            weights_.push_back(radial * dir_w[d]);
            total += weights_.back();
        }
    }
    for (auto& w : weights_) {
        w /= total;
    }
}

}  // namespace eckart::quantum
