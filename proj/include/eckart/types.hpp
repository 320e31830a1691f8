#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace eckart {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec3List = std::vector<Vec3>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input: bad files, violated preconditions,
/// degenerate geometry.
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not produce a result within tolerance
/// (singular matrix, solver non-convergence, failed invariant).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace eckart
