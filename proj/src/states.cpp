#include "eckart/states.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace eckart::quantum {

double hermite_function(int n, double x, double centre, double length) {
    if (n < 0) {
        throw InputError("Hermite function order must be non-negative");
    }
    const double xi = (x - centre) / length;
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur / std::sqrt(length);
}

LineFunction oscillator_state(int n, double hbar) {
    if (n < 0) {
        throw InputError("oscillator level must be non-negative");
    }
    const double length = std::sqrt(hbar);
    return [n, length](double x) { return Complex(hermite_function(n, x, 0.0, length)); };
}

LineFunction coherent_state(double x0, double p0, double hbar) {
    const double length = std::sqrt(hbar);
    return [=](double x) { return hermite_function(0, x, x0, length) * std::exp(Complex(0.0, p0 * x / hbar)); };
}

LineFunction plane_wave_packet(double k, double sigma, double centre) {
    return [=](double x) {
        const double u = (x - centre) / sigma;
        return std::exp(Complex(-0.25 * u * u, k * x));
    };
}

LineFunction random_line_state(std::mt19937_64& rng, double hbar) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.7, 1.3);
    std::array<Complex, 4> coeffs{};
    for (auto& c : coeffs) {
        c = Complex(unit(rng), unit(rng));
    }
    const double centre = 0.5 * unit(rng);
    const double length = std::sqrt(hbar) * scale(rng);
    const double k = unit(rng);
    return [=](double x) {
        Complex sum(0.0);
        for (int n = 0; n < 4; ++n) {
            sum += coeffs[static_cast<std::size_t>(n)] * hermite_function(n, x, centre, length);
        }
        return sum * std::exp(Complex(0.0, k * x));
    };
}

So3Function wrapped_gaussian(double sigma) {
    if (!(sigma > 0.0)) {
        throw InputError("gaussian width must be positive");
    }
    return [sigma](const Vec3& omega) {
        const double theta = omega.norm();
        double sum = 0.0;
        for (int m = -2; m <= 2; ++m) {
            const double d = theta - 2.0 * so3::kPi * m;
            sum += std::exp(-d * d / (4.0 * sigma * sigma));
        }
        return Complex(sum);
    };
}

So3Function gaussian_packet(const Vec3& centre, const Vec3& sigma, const Vec3& k) {
    if (!(sigma.minCoeff() > 0.0)) {
        throw InputError("gaussian widths must be positive");
    }
    return [=](const Vec3& omega) {
        const Vec3 d = omega - centre;
        const double exponent = -0.25 * d.cwiseQuotient(sigma).squaredNorm();
        return std::exp(Complex(exponent, k.dot(d)));
    };
}

So3Function geodesic_gaussian(const Vec3& centre, double sigma) {
    if (!(sigma > 0.0)) {
        throw InputError("gaussian width must be positive");
    }
    const so3::Rotation inv_centre = so3::exp_map(so3::wrap_to_ball(centre)).inverse();
    return [inv_centre, sigma](const Vec3& omega) {
        const so3::Rotation r = inv_centre * so3::exp_map(so3::wrap_to_ball(omega));
        const double d = so3::log_map(r).angle();
        return Complex(std::exp(-d * d / (4.0 * sigma * sigma)));
    };
}

So3Function random_so3_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> width(0.1, 0.2);
    Vec3 centre(unit(rng), unit(rng), unit(rng));
    centre *= 0.05 / std::max(1.0, centre.norm());
    const double base = width(rng);
    Vec3 sigma;
    for (int i = 0; i < 3; ++i) {
        sigma[i] = base * (1.0 + 0.1 * unit(rng));
    }
    const Vec3 k(2.0 * unit(rng), 2.0 * unit(rng), 2.0 * unit(rng));
    return gaussian_packet(centre, sigma, k);
}

}  // namespace eckart::quantum
