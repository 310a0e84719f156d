#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace krein {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Point = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Relative threshold shared by every block-invertibility decision.
inline constexpr double kSingularRelTol = 1e-10;

struct SingularShiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlockSingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoincidenceError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ProximityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct RegularityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DegeneracyError : std::domain_error {
  using std::domain_error::domain_error;
};

struct OrderMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace krein
