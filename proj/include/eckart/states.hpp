#pragma once

#include "eckart/quantum.hpp"

#include <random>

namespace eckart::quantum {

/// Normalized Hermite function of order n in the scaled variable
/// (x - centre) / length, including the length^-1/2 factor.
double hermite_function(int n, double x, double centre = 0.0, double length = 1.0);

/// Eigenstate n of the unit-mass, unit-frequency oscillator, length sqrt(hbar).
LineFunction oscillator_state(int n, double hbar);

/// Oscillator ground state displaced to x0 and boosted to momentum p0.
LineFunction coherent_state(double x0, double p0, double hbar);

/// e^{ikx} times a gaussian of standard deviation sigma in |psi|^2.
LineFunction plane_wave_packet(double k, double sigma, double centre = 0.0);

/// Random superposition of the lowest four Hermite functions with a random
/// centre, width and boost. Decays well inside [-12, 12] for hbar <= 1.
LineFunction random_line_state(std::mt19937_64& rng, double hbar);

/// Isotropic gaussian in the rotation angle around the identity, summed over
/// the 2 pi images: sum_m exp(-(theta - 2 pi m)^2 / (4 sigma^2)).
So3Function wrapped_gaussian(double sigma);

/// exp(-sum_i (d_i / (2 sigma_i))^2 + i k . d) with d = omega - centre.
So3Function gaussian_packet(const Vec3& centre, const Vec3& sigma, const Vec3& k);

/// Gaussian in the geodesic distance to the rotation `centre`: a continuous
/// function on the rotation group, so it may straddle the cyclic boundary.
So3Function geodesic_gaussian(const Vec3& centre, double sigma);

/// Random gaussian packet concentrated near the identity.
So3Function random_so3_state(std::mt19937_64& rng);

}  // namespace eckart::quantum
