#ifndef TRAINDESIGN_TYPES_HPP
#define TRAINDESIGN_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace traindesign {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using cplx = std::complex<double>;

// Thrown when inputs have inconsistent or unsupported shapes/values.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a design problem has no solution under the given data;
// the message names the violated constraint.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a matrix that must be invertible (or full rank) is not;
// the message names the offending dimension or factor.
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mixed absolute/relative comparison scale: tol * max(1, scale).
inline double tol_scale(double tol, double scale) {
  return tol * std::max(1.0, scale);
}

}  // namespace traindesign

#endif
